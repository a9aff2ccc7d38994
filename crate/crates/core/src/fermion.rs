//! Exterior algebra on anti-commuting generators u1..un and v1..vn whose
//! coefficients are commutative polynomials in t, c, eps, f0, f1.
//!
//! A wedge monomial is stored as a pair of bitmasks (one per block) in the
//! canonical order u1 < ... < un < v1 < ... < vn; bit i set in the u-mask
//! means u_{i+1} appears.  In epsilon mode, moving a v past a u costs a
//! factor of the commuting indeterminate eps instead of happening freely;
//! exchanges inside one block always cost -1.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num::BigInt;

use crate::coeff::Coefficient;
use crate::group::{Character, Group, Side};
use crate::perm::Perm;
use crate::poly::{Monomial, Poly};
use crate::vars::{Sym, VarRegistry};

/// Registry for fermion scalars: no u/v variables (those live in the masks),
/// just t, c, eps, f0, f1.
pub fn scalar_registry() -> Arc<VarRegistry> {
    VarRegistry::new(0, 1)
}

fn factorial(k: usize) -> Coefficient {
    let mut acc = BigInt::from(1);
    for i in 2..=k {
        acc *= i;
    }
    Coefficient::from_integer(acc)
}

fn choose2(k: u32) -> u32 {
    k * (k.saturating_sub(1)) / 2
}

/// An element of the exterior algebra: a map from wedge monomials, encoded
/// as (uMask, vMask), to commutative scalar polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionElem {
    n: usize,
    sreg: Arc<VarRegistry>,
    terms: HashMap<(u32, u32), Poly>,
}

impl FermionElem {
    pub fn zero(n: usize) -> FermionElem {
        assert!(n <= 32, "fermion size {n} exceeds the 32-generator limit");
        FermionElem {
            n,
            sreg: scalar_registry(),
            terms: HashMap::new(),
        }
    }

    pub fn one(n: usize) -> FermionElem {
        let mut e = FermionElem::zero(n);
        let one = Poly::one(&e.sreg);
        e.add_term(0, 0, &one);
        e
    }

    /// Purely scalar element (empty wedge part).
    pub fn scalar(n: usize, p: Poly) -> FermionElem {
        let mut e = FermionElem::zero(n);
        e.add_term(0, 0, &p);
        e
    }

    /// A single wedge monomial with the given scalar.
    pub fn wedge(n: usize, umask: u32, vmask: u32, scalar: Poly) -> FermionElem {
        let mut e = FermionElem::zero(n);
        assert!(
            umask < (1u64 << n) as u32 || n == 32,
            "u-mask out of range for n={n}"
        );
        assert!(
            vmask < (1u64 << n) as u32 || n == 32,
            "v-mask out of range for n={n}"
        );
        e.add_term(umask, vmask, &scalar);
        e
    }

    /// The generator u_i or v_j as an element.
    pub fn generator(n: usize, sym: Sym) -> FermionElem {
        let sreg = scalar_registry();
        let one = Poly::one(&sreg);
        match sym {
            Sym::U(i) => {
                assert!(i >= 1 && i <= n, "unknown generator u{i} for n={n}");
                FermionElem::wedge(n, 1 << (i - 1), 0, one)
            }
            Sym::V(j) => {
                assert!(j >= 1 && j <= n, "unknown generator v{j} for n={n}");
                FermionElem::wedge(n, 0, 1 << (j - 1), one)
            }
            other => panic!("unknown generator {other:?}: expected a u or v symbol"),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scalar_reg(&self) -> &Arc<VarRegistry> {
        &self.sreg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &Poly)> {
        self.terms.iter()
    }

    /// Scalar attached to a wedge monomial (zero if absent).
    pub fn scalar_at(&self, umask: u32, vmask: u32) -> Poly {
        self.terms
            .get(&(umask, vmask))
            .cloned()
            .unwrap_or_else(|| Poly::zero(&self.sreg))
    }

    pub fn add_term(&mut self, umask: u32, vmask: u32, scalar: &Poly) {
        if scalar.is_zero() {
            return;
        }
        assert_eq!(
            **scalar.registry(),
            *self.sreg,
            "scalar polynomial must live in the fermion scalar registry"
        );
        let entry = self
            .terms
            .entry((umask, vmask))
            .or_insert_with(|| Poly::zero(&self.sreg));
        *entry = entry.add(scalar);
        if entry.is_zero() {
            self.terms.remove(&(umask, vmask));
        }
    }

    pub fn add(&self, other: &FermionElem) -> FermionElem {
        assert_eq!(self.n, other.n, "fermion size mismatch");
        let mut out = self.clone();
        for (&(u, v), p) in &other.terms {
            out.add_term(u, v, p);
        }
        out
    }

    pub fn sub(&self, other: &FermionElem) -> FermionElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FermionElem {
        self.map_scalars(|p| p.neg())
    }

    pub fn scale(&self, a: &Coefficient) -> FermionElem {
        self.map_scalars(|p| p.scale(a))
    }

    /// Apply a function to every scalar, pruning the zeros it produces.
    pub fn map_scalars(&self, f: impl Fn(&Poly) -> Poly) -> FermionElem {
        let mut out = FermionElem::zero(self.n);
        for (&(u, v), p) in &self.terms {
            out.add_term(u, v, &f(p));
        }
        out
    }

    /// Substitute a constant for eps in every scalar.
    pub fn specialize_eps(&self, value: &Coefficient) -> FermionElem {
        let id = self.sreg.eps_id();
        let c = Poly::constant(&self.sreg, value.clone());
        self.map_scalars(|p| p.substitute_one(id, &c))
    }

    /// The element whose scalars are the coefficients of t^k (with t
    /// stripped).
    pub fn t_coefficient(&self, k: u32) -> FermionElem {
        self.map_scalars(|p| p.coeff_of_t(k))
    }

    pub fn max_t_degree(&self) -> u32 {
        self.terms.values().map(|p| p.max_t_degree()).max().unwrap_or(0)
    }

    /// Term strings ordered by (uMask, vMask) numerically, each scalar in
    /// canonical polynomial form.  Multi-term scalars attached to a nonempty
    /// wedge are parenthesized.
    pub fn canonical_terms(&self) -> Vec<String> {
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.sort_unstable();
        keys.into_iter()
            .map(|key| fermion_term_string(key.0, key.1, &self.terms[&key]))
            .collect()
    }

    /// Canonical serialization: the canonical terms joined with +/-.
    pub fn canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for piece in self.canonical_terms() {
            if out.is_empty() {
                out = piece;
            } else if let Some(rest) = piece.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&piece);
            }
        }
        out
    }
}

impl fmt::Display for FermionElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

fn wedge_string(umask: u32, vmask: u32) -> String {
    let mut parts = Vec::new();
    let mut m = umask;
    while m != 0 {
        parts.push(format!("u{}", m.trailing_zeros() + 1));
        m &= m - 1;
    }
    let mut m = vmask;
    while m != 0 {
        parts.push(format!("v{}", m.trailing_zeros() + 1));
        m &= m - 1;
    }
    parts.join("*")
}

fn fermion_term_string(umask: u32, vmask: u32, scalar: &Poly) -> String {
    let wedge = wedge_string(umask, vmask);
    if wedge.is_empty() {
        return scalar.canonical_string();
    }
    if scalar.num_terms() == 1 {
        let cs = scalar.canonical_string();
        if cs == "1" {
            wedge
        } else if cs == "-1" {
            format!("-{wedge}")
        } else {
            format!("{cs}*{wedge}")
        }
    } else {
        format!("({})*{}", scalar.canonical_string(), wedge)
    }
}

/// Sort a word of u/v generators into canonical order (u's ascending, then
/// v's ascending), tracking exchanges separately: same-block exchanges
/// contribute to the sign, v-past-u exchanges are counted as the eps
/// exponent.  Returns (sign, uMask, vMask, epsPower); sign 0 on a repeated
/// generator.
pub fn normal_order_eps(n: usize, word: &[Sym]) -> (i64, u32, u32, u32) {
    assert!(n <= 32, "fermion size {n} exceeds the 32-generator limit");
    let mut umask = 0u32;
    let mut vmask = 0u32;
    let mut useq: Vec<usize> = Vec::new();
    let mut vseq: Vec<usize> = Vec::new();
    let mut cross = 0u32;
    let mut vseen = 0u32;
    for &s in word {
        match s {
            Sym::U(i) => {
                assert!(i >= 1 && i <= n, "unknown generator u{i} for n={n}");
                let bit = 1u32 << (i - 1);
                if umask & bit != 0 {
                    return (0, 0, 0, 0);
                }
                umask |= bit;
                useq.push(i);
                cross += vseen;
            }
            Sym::V(j) => {
                assert!(j >= 1 && j <= n, "unknown generator v{j} for n={n}");
                let bit = 1u32 << (j - 1);
                if vmask & bit != 0 {
                    return (0, 0, 0, 0);
                }
                vmask |= bit;
                vseq.push(j);
                vseen += 1;
            }
            other => panic!("unknown generator {other:?}: expected a u or v symbol"),
        }
    }
    let mut inversions = 0u32;
    for seq in [&useq, &vseq] {
        for a in 0..seq.len() {
            for b in (a + 1)..seq.len() {
                if seq[a] > seq[b] {
                    inversions += 1;
                }
            }
        }
    }
    let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
    (sign, umask, vmask, cross)
}

/// Plain normal ordering: every exchange (same-block or v-past-u) costs -1.
pub fn normal_order(n: usize, word: &[Sym]) -> (i64, u32, u32) {
    let (sign, umask, vmask, cross) = normal_order_eps(n, word);
    if sign == 0 {
        return (0, 0, 0);
    }
    let sign = if cross % 2 == 0 { sign } else { -sign };
    (sign, umask, vmask)
}

/// Inversions created by concatenating two ascending runs of one block:
/// pairs (x in first, y in second) with x > y.
fn merge_inversions(first: u32, second: u32) -> u32 {
    let mut inv = 0;
    let mut m = second;
    while m != 0 {
        let j = m.trailing_zeros();
        inv += (first >> (j + 1)).count_ones();
        m &= m - 1;
    }
    inv
}

/// Wedge product, bilinear over the scalars.  Concatenating a term of `a`
/// with a term of `b` makes every v of `a` pass every u of `b` (eps each in
/// epsilon mode, -1 otherwise) and then sorts each block (-1 per inversion).
pub fn fermion_mul(a: &FermionElem, b: &FermionElem, epsilon_mode: bool) -> FermionElem {
    assert_eq!(a.n, b.n, "fermion size mismatch");
    let mut out = FermionElem::zero(a.n);
    let eps_id = out.sreg.eps_id();
    for ((au, av), ap) in &a.terms {
        for ((bu, bv), bp) in &b.terms {
            if au & bu != 0 || av & bv != 0 {
                continue;
            }
            let cross = av.count_ones() * bu.count_ones();
            let mut exchanges = merge_inversions(*au, *bu) + merge_inversions(*av, *bv);
            let mut scalar = ap.mul(bp);
            if epsilon_mode {
                if cross > 0 {
                    let eps_pow = Poly::term(
                        &out.sreg,
                        Monomial::from_pairs(&out.sreg, [(eps_id, cross)]),
                        Coefficient::one(),
                    );
                    scalar = scalar.mul(&eps_pow);
                }
            } else {
                exchanges += cross;
            }
            if exchanges % 2 == 1 {
                scalar = scalar.neg();
            }
            out.add_term(au | bu, av | bv, &scalar);
        }
    }
    out
}

/// The product prod_{j=1..n} (f0 + f1 t u_j v_j), computed factor by factor.
pub fn product_linear_series(n: usize, epsilon_mode: bool) -> FermionElem {
    let sreg = scalar_registry();
    let f0 = Poly::var(&sreg, Sym::F(0));
    let f1t = Poly::term(
        &sreg,
        Monomial::from_syms(&sreg, &[(Sym::F(1), 1), (Sym::T, 1)]),
        Coefficient::one(),
    );
    let mut acc = FermionElem::one(n);
    for j in 1..=n {
        let mut factor = FermionElem::scalar(n, f0.clone());
        factor.add_term(1 << (j - 1), 1 << (j - 1), &f1t);
        acc = fermion_mul(&acc, &factor, epsilon_mode);
    }
    acc
}

/// Closed form for product_linear_series: the sum over subsets J of
/// (-1)^C(|J|,2) f0^(n-|J|) (f1 t)^|J| u^J v^J, with eps^C(|J|,2) replacing
/// the sign in epsilon mode.  Built by direct mask construction, independent
/// of fermion_mul.
pub fn linear_series_closed_form(n: usize, epsilon_mode: bool) -> FermionElem {
    assert!(n <= 32, "fermion size {n} exceeds the 32-generator limit");
    let sreg = scalar_registry();
    let f0_id = sreg.id(Sym::F(0));
    let f1_id = sreg.id(Sym::F(1));
    let mut out = FermionElem::zero(n);
    for mask in 0..(1u64 << n) as u32 {
        let k = mask.count_ones();
        let c2 = choose2(k);
        let mut pairs = vec![(f0_id, n as u32 - k), (f1_id, k), (sreg.t_id(), k)];
        let mut coeff = Coefficient::one();
        if epsilon_mode {
            pairs.push((sreg.eps_id(), c2));
        } else if c2 % 2 == 1 {
            coeff = coeff.neg();
        }
        let scalar = Poly::term(&sreg, Monomial::from_pairs(&sreg, pairs), coeff);
        out.add_term(mask, mask, &scalar);
    }
    out
}

/// Relabel one block of generators by g, resorting each wedge and tracking
/// the sorting sign.
pub fn act_fermion(g: &Perm, x: &FermionElem, side: Side) -> FermionElem {
    assert_eq!(
        g.n(),
        x.n,
        "permutation degree {} does not match fermion size {}",
        g.n(),
        x.n
    );
    let mut out = FermionElem::zero(x.n);
    for (&(umask, vmask), scalar) in &x.terms {
        let (sign, newu, newv) = match side {
            Side::U => {
                let (s, m) = act_mask(g, umask);
                (s, m, vmask)
            }
            Side::V => {
                let (s, m) = act_mask(g, vmask);
                (s, umask, m)
            }
        };
        let p = if sign < 0 { scalar.neg() } else { scalar.clone() };
        out.add_term(newu, newv, &p);
    }
    out
}

/// Map a mask through g and return (sorting sign of the image tuple, image
/// mask).
fn act_mask(g: &Perm, mask: u32) -> (i64, u32) {
    let mut images: Vec<usize> = Vec::new();
    let mut m = mask;
    while m != 0 {
        images.push(g.apply(m.trailing_zeros() as usize));
        m &= m - 1;
    }
    let mut inversions = 0usize;
    for a in 0..images.len() {
        for b in (a + 1)..images.len() {
            if images[a] > images[b] {
                inversions += 1;
            }
        }
    }
    let newmask = images.iter().fold(0u32, |acc, &i| acc | (1u32 << i));
    (if inversions.is_multiple_of(2) { 1 } else { -1 }, newmask)
}

/// The averaging operator e_chi = (chi(1)/|G|) sum_g chi(g) g^-1 acting on
/// one block of generators; conjugate applies the complex-conjugate
/// character.
pub fn e_chi_apply_fermion(
    group: &Group,
    chi: &Character,
    side: Side,
    x: &FermionElem,
    conjugate: bool,
) -> FermionElem {
    assert_eq!(
        group.n(),
        x.n,
        "group degree {} does not match fermion size {}",
        group.n(),
        x.n
    );
    assert_eq!(
        chi.num_classes(),
        group.class_count(),
        "character not defined on all classes of the group"
    );
    let mut sum = FermionElem::zero(x.n);
    for i in 0..group.order() {
        let w = chi.value(group.class_of(i));
        let w = if conjugate { w.conj() } else { w.clone() };
        if w.is_zero() {
            continue;
        }
        let acted = act_fermion(group.element(group.inverse_index(i)), x, side);
        sum = sum.add(&acted.scale(&w));
    }
    let norm = chi
        .degree()
        .mul(&Coefficient::rational(1, group.order() as i64));
    sum.scale(&norm)
}

/// Determinant of the matrix (f0 + f1 t u_i v_j), expanded as the signed sum
/// over permutations with entries multiplied in row order.
pub fn det_fermion(n: usize, epsilon_mode: bool) -> FermionElem {
    matrix_expansion(n, true, epsilon_mode)
}

/// Permanent of the matrix (f0 + f1 t u_i v_j).
pub fn perm_fermion(n: usize, epsilon_mode: bool) -> FermionElem {
    matrix_expansion(n, false, epsilon_mode)
}

fn matrix_expansion(n: usize, signed: bool, epsilon_mode: bool) -> FermionElem {
    assert!(n >= 1, "matrix expansion requires n >= 1");
    let sreg = scalar_registry();
    let f0 = Poly::var(&sreg, Sym::F(0));
    let f1t = Poly::term(
        &sreg,
        Monomial::from_syms(&sreg, &[(Sym::F(1), 1), (Sym::T, 1)]),
        Coefficient::one(),
    );
    let entry = |i: usize, j: usize| -> FermionElem {
        let mut e = FermionElem::scalar(n, f0.clone());
        e.add_term(1 << i, 1 << j, &f1t);
        e
    };
    let mut total = FermionElem::zero(n);
    for g in Perm::all(n) {
        let mut prod = FermionElem::one(n);
        for i in 0..n {
            prod = fermion_mul(&prod, &entry(i, g.apply(i)), epsilon_mode);
        }
        if signed && g.sign() < 0 {
            prod = prod.neg();
        }
        total = total.add(&prod);
    }
    total
}

/// Closed form for det_fermion: only the t^n and t^(n-1) layers survive.
/// t^n carries (-1)^C(n,2) n! f1^n u^[n] v^[n]; t^(n-1) carries
/// (-1)^C(n-1,2) (n-1)! f0 f1^(n-1) times the signed sums over one omitted
/// u-index and one omitted v-index.  Epsilon mode replaces each sign
/// (-1)^C(k,2) by eps^C(k,2).
pub fn det_closed_form(n: usize, epsilon_mode: bool) -> FermionElem {
    assert!(n >= 1, "closed form requires n >= 1");
    let sreg = scalar_registry();
    let f0_id = sreg.id(Sym::F(0));
    let f1_id = sreg.id(Sym::F(1));
    let full: u32 = ((1u64 << n) - 1) as u32;
    let mut out = FermionElem::zero(n);
    {
        let c2 = choose2(n as u32);
        let mut pairs = vec![(f1_id, n as u32), (sreg.t_id(), n as u32)];
        let mut coeff = factorial(n);
        if epsilon_mode {
            pairs.push((sreg.eps_id(), c2));
        } else if c2 % 2 == 1 {
            coeff = coeff.neg();
        }
        let scalar = Poly::term(&sreg, Monomial::from_pairs(&sreg, pairs), coeff);
        out.add_term(full, full, &scalar);
    }
    let c2 = choose2(n as u32 - 1);
    for i in 0..n {
        for j in 0..n {
            let mut pairs = vec![
                (f0_id, 1),
                (f1_id, n as u32 - 1),
                (sreg.t_id(), n as u32 - 1),
            ];
            let mut coeff = factorial(n - 1);
            if (i + j) % 2 == 1 {
                coeff = coeff.neg();
            }
            if epsilon_mode {
                pairs.push((sreg.eps_id(), c2));
            } else if c2 % 2 == 1 {
                coeff = coeff.neg();
            }
            let scalar = Poly::term(&sreg, Monomial::from_pairs(&sreg, pairs), coeff);
            out.add_term(full & !(1 << i), full & !(1 << j), &scalar);
        }
    }
    out
}

/// Closed form for perm_fermion: n! f0^n plus (n-1)! f0^(n-1) f1 t times the
/// full sum over one u-index and one v-index.
pub fn perm_closed_form(n: usize) -> FermionElem {
    assert!(n >= 1, "closed form requires n >= 1");
    let sreg = scalar_registry();
    let f0_id = sreg.id(Sym::F(0));
    let f1_id = sreg.id(Sym::F(1));
    let mut out = FermionElem::zero(n);
    let constant = Poly::term(
        &sreg,
        Monomial::from_pairs(&sreg, [(f0_id, n as u32)]),
        factorial(n),
    );
    out.add_term(0, 0, &constant);
    let scalar = Poly::term(
        &sreg,
        Monomial::from_pairs(&sreg, [(f0_id, n as u32 - 1), (f1_id, 1), (sreg.t_id(), 1)]),
        factorial(n - 1),
    );
    for i in 0..n {
        for j in 0..n {
            out.add_term(1 << i, 1 << j, &scalar);
        }
    }
    out
}

/// The product prod_{i,j=1..n} (1 + t u_i v_j), factors in lexicographic
/// order (1,1), (1,2), ..., (n,n).
pub fn cauchy_product_fermion(n: usize, epsilon_mode: bool) -> FermionElem {
    assert!(n >= 1, "cauchy product requires n >= 1");
    let sreg = scalar_registry();
    let t = Poly::var(&sreg, Sym::T);
    let mut acc = FermionElem::one(n);
    for i in 0..n {
        for j in 0..n {
            let mut factor = FermionElem::one(n);
            factor.add_term(1 << i, 1 << j, &t);
            acc = fermion_mul(&acc, &factor, epsilon_mode);
        }
    }
    acc
}

/// Closed form 1 + t (sum_i u_i)(sum_j v_j) for cauchy_product_fermion.
pub fn cauchy_closed_form(n: usize) -> FermionElem {
    let sreg = scalar_registry();
    let t = Poly::var(&sreg, Sym::T);
    let mut out = FermionElem::one(n);
    for i in 0..n {
        for j in 0..n {
            out.add_term(1 << i, 1 << j, &t);
        }
    }
    out
}

/// Sum over S_k of (-1)^(Coxeter length): 1 for k = 1 and 0 for k >= 2.
pub fn muir_sum(k: usize) -> Coefficient {
    assert!(k >= 1, "muir_sum requires k >= 1");
    let mut acc = Coefficient::zero();
    let minus_one = Coefficient::from_int(-1);
    let one = Coefficient::one();
    for g in Perm::all(k) {
        if g.inversions() % 2 == 0 {
            acc = acc.add(&one);
        } else {
            acc = acc.add(&minus_one);
        }
    }
    acc
}
