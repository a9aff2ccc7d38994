//! Exact scalars: elements of the cyclotomic field Q(zeta_N), stored as
//! phi(N) coordinates in the power basis modulo the N-th cyclotomic
//! polynomial. N = 1 is plain Q.
//!
//! Binary arithmetic lifts N = 1 operands into the other operand's field;
//! mixing two conductors > 1 is a programming error and panics.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, Mutex};

/// N-th cyclotomic polynomial, little-endian integer coefficients, monic.
fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "conductor must be positive");
    // x^n - 1 divided by Phi_d over all proper divisors d of n.
    let mut poly: Vec<BigInt> = vec![BigInt::from(-1)];
    poly.extend(std::iter::repeat_with(BigInt::zero).take(n as usize - 1));
    poly.push(BigInt::one());
    for d in 1..n {
        if n.is_multiple_of(d) {
            poly = int_poly_div_exact(&poly, &cyclotomic_poly(d));
        }
    }
    poly
}

/// Exact division of integer polynomials; the divisor must be monic.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    assert!(den[dd].is_one());
    let mut rem: Vec<BigInt> = num.to_vec();
    let qlen = num.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "non-exact polynomial division");
    quot
}

/// Shared per-conductor data: reduction rows for the power basis.
struct CycloField {
    n: u32,
    phi: usize,
    /// Row k holds the coordinates of x^(phi+k), k = 0..phi-1.
    reduction: Vec<Vec<BigRational>>,
    /// Row j holds the coordinates of zeta^j, j = 0..n-1.
    zeta_pow: Vec<Vec<BigRational>>,
}

/// Multiply a power-basis element by x and reduce the overflow via
/// x^phi = xphi.
fn shift_reduce(v: &[BigRational], xphi: &[BigRational], phi: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); phi];
    out[1..phi].clone_from_slice(&v[..phi - 1]);
    let top = &v[phi - 1];
    if !top.is_zero() {
        for i in 0..phi {
            out[i] += top * &xphi[i];
        }
    }
    out
}

impl CycloField {
    fn new(n: u32) -> CycloField {
        let cp = cyclotomic_poly(n);
        let phi = cp.len() - 1;
        let xphi: Vec<BigRational> = cp[..phi]
            .iter()
            .map(|c| -BigRational::from_integer(c.clone()))
            .collect();
        let mut reduction = Vec::with_capacity(phi);
        reduction.push(xphi.clone());
        for k in 1..phi {
            let next = shift_reduce(&reduction[k - 1], &xphi, phi);
            reduction.push(next);
        }
        let mut zeta_pow = Vec::with_capacity(n as usize);
        let mut z = vec![BigRational::zero(); phi];
        z[0] = BigRational::one();
        for _ in 0..n {
            zeta_pow.push(z.clone());
            z = shift_reduce(&z, &xphi, phi);
        }
        CycloField { n, phi, reduction, zeta_pow }
    }
}

static FIELDS: LazyLock<Mutex<HashMap<u32, Arc<CycloField>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn field(n: u32) -> Arc<CycloField> {
    let mut map = FIELDS.lock().unwrap();
    map.entry(n)
        .or_insert_with(|| Arc::new(CycloField::new(n)))
        .clone()
}

/// Euler's totient of n (the power-basis dimension of Q(zeta_n)).
pub fn euler_phi(n: u32) -> usize {
    field(n).phi
}

/// An exact scalar in Q(zeta_N); `conductor` = N, `coords` = the phi(N)
/// power-basis coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct Coefficient {
    conductor: u32,
    coords: Vec<BigRational>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient { conductor: 1, coords: vec![BigRational::zero()] }
    }

    pub fn one() -> Self {
        Coefficient { conductor: 1, coords: vec![BigRational::one()] }
    }

    pub fn from_int(k: i64) -> Self {
        Coefficient::from_rational(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn from_integer(k: BigInt) -> Self {
        Coefficient::from_rational(BigRational::from_integer(k))
    }

    /// BigRational normalizes to lowest terms with a positive denominator,
    /// which is exactly the storage invariant.
    pub fn from_rational(r: BigRational) -> Self {
        Coefficient { conductor: 1, coords: vec![r] }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Coefficient::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// zeta_n^k (k taken mod n; negative k allowed).
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1);
        let f = field(n);
        let j = k.rem_euclid(n as i64) as usize;
        Coefficient { conductor: n, coords: f.zeta_pow[j].clone() }
    }

    /// Assemble from explicit power-basis coordinates in Q(zeta_n).
    pub fn from_coords(n: u32, coords: Vec<BigRational>) -> Self {
        assert!(n >= 1);
        let f = field(n);
        assert_eq!(
            coords.len(),
            f.phi,
            "expected {} power-basis coordinates for conductor {}",
            f.phi,
            n
        );
        Coefficient { conductor: n, coords }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// True when the value lies in Q (all higher coordinates vanish).
    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.is_rational() {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// Re-express in Q(zeta_n). Only N = 1 values can change conductor.
    pub fn lift(&self, n: u32) -> Coefficient {
        if self.conductor == n {
            return self.clone();
        }
        assert!(
            self.conductor == 1,
            "cannot lift conductor {} into {}",
            self.conductor,
            n
        );
        let f = field(n);
        let mut coords = vec![BigRational::zero(); f.phi];
        coords[0] = self.coords[0].clone();
        Coefficient { conductor: n, coords }
    }

    fn binop(
        &self,
        other: &Coefficient,
        f: impl Fn(&Coefficient, &Coefficient) -> Coefficient,
    ) -> Coefficient {
        if self.conductor == other.conductor {
            f(self, other)
        } else if self.conductor == 1 {
            f(&self.lift(other.conductor), other)
        } else if other.conductor == 1 {
            f(self, &other.lift(self.conductor))
        } else {
            panic!(
                "incompatible conductors {} and {}",
                self.conductor, other.conductor
            );
        }
    }

    pub fn add(&self, other: &Coefficient) -> Coefficient {
        self.binop(other, |a, b| Coefficient {
            conductor: a.conductor,
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        })
    }

    /// In-place add, avoiding reallocation on the common same-conductor
    /// path (the accumulation hot spot in polynomial products).
    pub fn add_in_place(&mut self, other: &Coefficient) {
        if self.conductor == other.conductor {
            for (x, y) in self.coords.iter_mut().zip(&other.coords) {
                *x += y;
            }
        } else if other.conductor == 1 {
            self.coords[0] += &other.coords[0];
        } else {
            *self = self.add(other);
        }
    }

    pub fn sub(&self, other: &Coefficient) -> Coefficient {
        self.binop(other, |a, b| Coefficient {
            conductor: a.conductor,
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
        })
    }

    pub fn neg(&self) -> Coefficient {
        Coefficient {
            conductor: self.conductor,
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, other: &Coefficient) -> Coefficient {
        if self.conductor == 1 && other.conductor == 1 {
            return Coefficient {
                conductor: 1,
                coords: vec![&self.coords[0] * &other.coords[0]],
            };
        }
        self.binop(other, |a, b| {
            let f = field(a.conductor);
            let phi = f.phi;
            let mut conv = vec![BigRational::zero(); 2 * phi - 1];
            for (i, x) in a.coords.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.coords.iter().enumerate() {
                    if !y.is_zero() {
                        conv[i + j] += x * y;
                    }
                }
            }
            let mut coords: Vec<BigRational> = conv[..phi].to_vec();
            for (row, overflow) in f.reduction.iter().zip(&conv[phi..]) {
                if overflow.is_zero() {
                    continue;
                }
                for (c, r) in coords.iter_mut().zip(row) {
                    *c += overflow * r;
                }
            }
            Coefficient { conductor: a.conductor, coords }
        })
    }

    /// Galois conjugation zeta -> zeta^{-1}; the identity on Q.
    pub fn conj(&self) -> Coefficient {
        if self.conductor == 1 {
            return self.clone();
        }
        let f = field(self.conductor);
        let mut coords = vec![BigRational::zero(); f.phi];
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &f.zeta_pow[((f.n - j as u32) % f.n) as usize];
            for i in 0..f.phi {
                coords[i] += c * &row[i];
            }
        }
        Coefficient { conductor: self.conductor, coords }
    }

    /// |z|^2 = z * conj(z).
    pub fn abs2(&self) -> Coefficient {
        self.mul(&self.conj())
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in
    /// Q[x] modulo Phi_N. Panics on zero.
    pub fn inv(&self) -> Coefficient {
        assert!(!self.is_zero(), "division by zero");
        if self.conductor == 1 {
            return Coefficient {
                conductor: 1,
                coords: vec![self.coords[0].recip()],
            };
        }
        let f = field(self.conductor);
        let phi_poly: Vec<BigRational> = cyclotomic_poly(self.conductor)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        // Invariant: s_i * self + (...) * Phi = r_i.
        let mut r0 = phi_poly;
        let mut r1 = rp_trim(self.coords.clone());
        let mut s0: Vec<BigRational> = vec![];
        let mut s1 = vec![BigRational::one()];
        while !r1.is_empty() {
            let (q, r) = rp_divmod(&r0, &r1);
            let s = rp_sub(&s0, &rp_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // Phi_N is irreducible, so the gcd is a nonzero constant.
        assert!(r0.len() == 1, "inverse failed: gcd not constant");
        let scale = r0[0].recip();
        let mut coords = vec![BigRational::zero(); f.phi];
        for (i, c) in s0.iter().enumerate() {
            coords[i] = c * &scale;
        }
        Coefficient { conductor: self.conductor, coords }
    }

    pub fn div(&self, other: &Coefficient) -> Coefficient {
        self.mul(&other.inv())
    }

    /// Canonical text form: rational values as "p" or "p/q"; genuinely
    /// cyclotomic values as a bracketed coordinate list "[c0,c1,...]".
    pub fn canonical_string(&self) -> String {
        if let Some(r) = self.as_rational() {
            rational_string(r)
        } else {
            let parts: Vec<String> = self.coords.iter().map(rational_string).collect();
            format!("[{}]", parts.join(","))
        }
    }

    /// True for rational values < 0 (used by the pretty-printer to fold
    /// signs into "a - b" term joins).
    pub fn is_negative_rational(&self) -> bool {
        self.as_rational().map(Signed::is_negative).unwrap_or(false)
    }
}

pub(crate) fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

// Dense rational polynomials (little-endian), used only by `inv`.

fn rp_trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map(Zero::is_zero).unwrap_or(false) {
        v.pop();
    }
    v
}

fn rp_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    rp_trim(out)
}

fn rp_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    rp_trim(out)
}

fn rp_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!den.is_empty());
    let dd = den.len() - 1;
    let lead = &den[dd];
    let mut rem = num.to_vec();
    if num.len() <= dd {
        return (vec![], rp_trim(rem));
    }
    let qlen = num.len() - dd;
    let mut quot = vec![BigRational::zero(); qlen];
    for k in (0..qlen).rev() {
        if rem[k + dd].is_zero() {
            continue;
        }
        let c = &rem[k + dd] / lead;
        for (i, d) in den.iter().enumerate() {
            let prod = &c * d;
            rem[k + i] -= prod;
        }
        quot[k] = c;
    }
    (rp_trim(quot), rp_trim(rem))
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coefficient(N={}, {})", self.conductor, self.canonical_string())
    }
}

impl From<i64> for Coefficient {
    fn from(k: i64) -> Self {
        Coefficient::from_int(k)
    }
}

impl std::ops::Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        Coefficient::add(self, rhs)
    }
}

impl std::ops::Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        Coefficient::sub(self, rhs)
    }
}

impl std::ops::Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        Coefficient::mul(self, rhs)
    }
}

impl std::ops::Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient::neg(self)
    }
}
