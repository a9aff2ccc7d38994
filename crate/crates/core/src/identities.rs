//! Identity verifiers.  Each verifier builds the left- and right-hand sides
//! of one expansion identity through disjoint code paths (matrix functional
//! or direct product on the left, closed-form summation on the right) and
//! reports whether the difference is exactly zero.
//!
//! Truncation bookkeeping is the main hazard and is documented on every
//! side-builder.  The common pattern: an entrywise series truncated at
//! monomial order `cap` is exact for all comparisons up to t-degree `tcap`
//! whenever no discarded term can contribute below `tcap` (for determinants
//! the alternant cancellation of repeated exponent vectors raises the safe
//! window from `cap` to `cap + C(n,2)`).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num::{BigInt, Integer, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::Coefficient;
use crate::fermion::{
    self, cauchy_closed_form, cauchy_product_fermion, det_closed_form, det_fermion,
    e_chi_apply_fermion, fermion_mul, linear_series_closed_form, perm_closed_form, perm_fermion,
    product_linear_series, FermionElem,
};
use crate::group::{
    character_table_load, cyclic_characters, partition_name, sn_characters, Character, Group, Side,
};
use crate::matrix::PolyMatrix;
use crate::poly::{Monomial, Poly};
use crate::symfunc::{dual_partition, monomial_sym, partitions_upto, pow_matrix, schur, stab_size, vandermonde, weight};
use crate::vars::{Sym, VarRegistry};
use crate::{Error, Result};

/// Maximum number of difference terms embedded in a report.
const DIFFERENCE_CAP: usize = 50;

/// The identity catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityName {
    Cauchy,
    Frobenius,
    MasterBoson,
    DetExpansion,
    PermExpansion,
    Loewner,
    MasterFermion,
    DetFermion,
    PermFermion,
    Products,
    Epsilon,
}

impl IdentityName {
    pub const ALL: [IdentityName; 11] = [
        IdentityName::Cauchy,
        IdentityName::Frobenius,
        IdentityName::MasterBoson,
        IdentityName::DetExpansion,
        IdentityName::PermExpansion,
        IdentityName::Loewner,
        IdentityName::MasterFermion,
        IdentityName::DetFermion,
        IdentityName::PermFermion,
        IdentityName::Products,
        IdentityName::Epsilon,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityName::Cauchy => "cauchy",
            IdentityName::Frobenius => "frobenius",
            IdentityName::MasterBoson => "master-boson",
            IdentityName::DetExpansion => "det-expansion",
            IdentityName::PermExpansion => "perm-expansion",
            IdentityName::Loewner => "loewner",
            IdentityName::MasterFermion => "master-fermion",
            IdentityName::DetFermion => "det-fermion",
            IdentityName::PermFermion => "perm-fermion",
            IdentityName::Products => "products",
            IdentityName::Epsilon => "epsilon",
        }
    }

    /// True when the verifier resolves a group and character.
    pub fn needs_group(self) -> bool {
        matches!(self, IdentityName::MasterBoson | IdentityName::MasterFermion)
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityName {
    type Err = Error;

    fn from_str(s: &str) -> Result<IdentityName> {
        IdentityName::ALL
            .into_iter()
            .find(|name| name.as_str() == s)
            .ok_or_else(|| {
                let catalog: Vec<&str> = IdentityName::ALL.iter().map(|n| n.as_str()).collect();
                Error::Usage(format!(
                    "unknown identity '{s}'; available: {}, all",
                    catalog.join(", ")
                ))
            })
    }
}

/// One verification job: which identity, at which size and truncation
/// degree, over which group/character, in which variable mode.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCase {
    pub identity: IdentityName,
    pub n: usize,
    pub degree: u32,
    pub group: String,
    #[serde(rename = "char")]
    pub character: String,
    pub epsilon: bool,
    pub scaled: bool,
}

impl IdentityCase {
    pub fn new(identity: IdentityName, n: usize, degree: u32) -> IdentityCase {
        IdentityCase {
            identity,
            n,
            degree,
            group: "builtin:Sn".to_string(),
            character: "sign".to_string(),
            epsilon: false,
            scaled: false,
        }
    }

    pub fn with_group(mut self, spec: &str) -> IdentityCase {
        self.group = spec.to_string();
        self
    }

    pub fn with_character(mut self, spec: &str) -> IdentityCase {
        self.character = spec.to_string();
        self
    }

    pub fn with_epsilon(mut self, epsilon: bool) -> IdentityCase {
        self.epsilon = epsilon;
        self
    }

    pub fn with_scaled(mut self, scaled: bool) -> IdentityCase {
        self.scaled = scaled;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Mismatch,
}

/// Outcome of one case: the echoed configuration, the verdict, the
/// difference (LHS - RHS, canonical serialization, capped at 50 terms),
/// term counts of the two outermost sides, and the wall-clock duration.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub case: IdentityCase,
    pub status: Status,
    pub difference: Vec<String>,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    pub ms: u64,
}

impl VerificationReport {
    pub fn verified(&self) -> bool {
        self.status == Status::Verified
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

// ---------------------------------------------------------------------------
// Group and character resolution
// ---------------------------------------------------------------------------

/// Resolve a group spec (builtin:S<k>|A<k>|C<k> with literal `n` meaning the
/// case's n, or file:<path>) together with its character table.  The table
/// is empty when no built-in table exists for the group (the sign/trivial
/// characters are still resolvable by name).
pub fn resolve_group(spec: &str, n: usize, max_group_size: usize) -> Result<(Group, Vec<Character>)> {
    if let Some(rest) = spec.strip_prefix("builtin:") {
        if rest.len() < 2 {
            return Err(Error::Usage(format!("malformed builtin group spec '{spec}'")));
        }
        let (kind, deg_str) = rest.split_at(1);
        let deg: usize = if deg_str == "n" {
            n
        } else {
            deg_str
                .parse()
                .map_err(|_| Error::Usage(format!("malformed builtin group spec '{spec}'")))?
        };
        if deg != n {
            return Err(Error::Usage(format!(
                "group degree {deg} does not match n={n}"
            )));
        }
        if deg == 0 {
            return Err(Error::Usage("group degree must be at least 1".to_string()));
        }
        let (group, table) = match kind {
            "S" => {
                check_builtin_degree(deg, max_group_size, factorial_int(deg))?;
                let g = Group::symmetric(deg);
                let chars = sn_characters(&g);
                (g, chars)
            }
            "A" => {
                let order = if deg <= 2 { BigInt::from(1) } else { factorial_int(deg) / 2 };
                check_builtin_degree(deg, max_group_size, order)?;
                let g = Group::alternating(deg);
                // A_n is cyclic only for n <= 3; otherwise no built-in table.
                let chars = cyclic_characters(&g).unwrap_or_default();
                (g, chars)
            }
            "C" => {
                if deg > max_group_size {
                    return Err(Error::Resource(format!(
                        "group order {deg} exceeds the maximum size {max_group_size}"
                    )));
                }
                let g = Group::cyclic(deg);
                let chars = cyclic_characters(&g)?;
                (g, chars)
            }
            other => {
                return Err(Error::Usage(format!(
                    "unknown builtin group kind '{other}' (expected S, A, or C)"
                )))
            }
        };
        Ok((group, table))
    } else if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)?;
        let (group, chars) = character_table_load(&text, max_group_size)?;
        if group.n() != n {
            return Err(Error::Usage(format!(
                "group degree {} from '{path}' does not match n={n}",
                group.n()
            )));
        }
        Ok((group, chars))
    } else {
        Err(Error::Usage(format!(
            "group spec '{spec}' must be builtin:S<k>|A<k>|C<k> or file:<path>"
        )))
    }
}

fn check_builtin_degree(deg: usize, max_group_size: usize, order: BigInt) -> Result<()> {
    if deg > 8 {
        return Err(Error::Usage(format!(
            "builtin symmetric/alternating groups support degree at most 8, got {deg}"
        )));
    }
    if order > BigInt::from(max_group_size) {
        return Err(Error::Resource(format!(
            "group order {order} exceeds the maximum size {max_group_size}"
        )));
    }
    Ok(())
}

/// Resolve a character spec: "sign" or "trivial" (synthesized for any
/// group), a bare index into the table ("1"), a partition ("2,1", symmetric
/// groups), or a table row name ("[2,1]", "chi1").
pub fn resolve_character(group: &Group, table: &[Character], spec: &str) -> Result<Character> {
    if spec == "sign" {
        return Ok(Character::sign(group));
    }
    if spec == "trivial" {
        return Ok(Character::trivial(group));
    }
    if !spec.is_empty() && spec.bytes().all(|b| b.is_ascii_digit()) {
        let idx: usize = spec
            .parse()
            .map_err(|_| Error::Usage(format!("malformed character index '{spec}'")))?;
        return table.get(idx).cloned().ok_or_else(|| {
            Error::Usage(format!(
                "character index {idx} out of range (table has {} rows)",
                table.len()
            ))
        });
    }
    let name = if spec.contains(',') && !spec.starts_with('[') {
        // Partition form "2,1" (a trailing comma permits one-part
        // partitions, e.g. "3,").
        let parts: Vec<usize> = spec
            .split(',')
            .filter(|piece| !piece.is_empty())
            .map(|piece| {
                piece
                    .trim()
                    .parse()
                    .map_err(|_| Error::Usage(format!("malformed partition '{spec}'")))
            })
            .collect::<Result<_>>()?;
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Usage(format!(
                "partition '{spec}' is not weakly decreasing"
            )));
        }
        if parts.iter().sum::<usize>() != group.n() {
            return Err(Error::Usage(format!(
                "partition '{spec}' does not sum to n={}",
                group.n()
            )));
        }
        partition_name(&parts)
    } else {
        spec.to_string()
    };
    table
        .iter()
        .find(|chi| chi.name() == name)
        .cloned()
        .ok_or_else(|| {
            let names: Vec<&str> = table.iter().map(|c| c.name()).collect();
            Error::Usage(format!(
                "character '{name}' not in the table; available: sign, trivial{}{}",
                if names.is_empty() { "" } else { ", " },
                names.join(", ")
            ))
        })
}

// ---------------------------------------------------------------------------
// Shared construction helpers
// ---------------------------------------------------------------------------

fn choose2u(k: u32) -> u32 {
    k * k.saturating_sub(1) / 2
}

fn factorial_int(k: usize) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 2..=k {
        acc *= i;
    }
    acc
}

fn coeff_factorial(k: usize) -> Coefficient {
    Coefficient::from_integer(factorial_int(k))
}

/// All vectors in Z_{>=0}^n with coordinate sum <= max_weight, in
/// lexicographic order.
pub fn vectors_upto(n: usize, max_weight: usize) -> Vec<Vec<usize>> {
    fn rec(slots: usize, budget: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            out.push(prefix.clone());
            return;
        }
        for value in 0..=budget {
            prefix.push(value);
            rec(slots - 1, budget - value, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_weight, &mut Vec::new(), &mut out);
    out
}

/// Entry sum_{M=0..cap} t^M u_i^M v_j^M (1-based i, j).
fn geometric_entry(reg: &Arc<VarRegistry>, i: usize, j: usize, cap: u32) -> Poly {
    let ui = reg.id(Sym::U(i));
    let vj = reg.id(Sym::V(j));
    let t = reg.t_id();
    let mut p = Poly::zero(reg);
    for m in 0..=cap {
        p.add_term(
            Monomial::from_pairs(reg, [(t, m), (ui, m), (vj, m)]),
            &Coefficient::one(),
        );
    }
    p
}

/// Entry sum_{M=0..cap} f_M t^M u_i^M v_j^M; with eps_layer, each summand
/// carries eps^C(M,2) (the normal-ordering cost of (u v)^M).
fn f_series_entry(reg: &Arc<VarRegistry>, i: usize, j: usize, cap: u32, eps_layer: bool) -> Poly {
    let ui = reg.id(Sym::U(i));
    let vj = reg.id(Sym::V(j));
    let t = reg.t_id();
    let mut p = Poly::zero(reg);
    for m in 0..=cap {
        let mut pairs = vec![(reg.id(Sym::F(m as usize)), 1), (t, m), (ui, m), (vj, m)];
        if eps_layer {
            pairs.push((reg.eps_id(), choose2u(m)));
        }
        p.add_term(Monomial::from_pairs(reg, pairs), &Coefficient::one());
    }
    p
}

/// The diagonal product prod_{i=1..n} f(t u_i v_i) with factors truncated at
/// monomial order `cap` and the product truncated at t-degree `cap`.  In
/// eps mode each factor is pre-normal-ordered (eps^C(M,2) per summand) and
/// factors are combined left to right with eps_mul, so a term of t-degree k
/// carries exactly eps^C(k,2).
fn diag_product(reg: &Arc<VarRegistry>, cap: u32, epsilon: bool) -> Poly {
    let n = reg.n();
    let mut acc = Poly::one(reg);
    for i in 1..=n {
        let factor = f_series_entry(reg, i, i, cap, epsilon);
        acc = if epsilon {
            acc.eps_mul(&factor, Some(cap))
        } else {
            acc.mul_trunc(&factor, Some(cap))
        };
    }
    acc
}

/// Monomial pairs for t^{|m|} prod_i f_{m_i}.
fn f_vector_pairs(reg: &Arc<VarRegistry>, m: &[usize]) -> Vec<(u32, u32)> {
    let mut pairs: Vec<(u32, u32)> = m.iter().map(|&mi| (reg.id(Sym::F(mi)), 1)).collect();
    pairs.push((reg.t_id(), weight(m) as u32));
    pairs
}

/// The monomial x^m on one side as a one-term polynomial.
fn side_power(reg: &Arc<VarRegistry>, m: &[usize], side: Side) -> Poly {
    let pairs: Vec<(u32, u32)> = m
        .iter()
        .enumerate()
        .map(|(i, &mi)| {
            let sym = match side {
                Side::U => Sym::U(i + 1),
                Side::V => Sym::V(i + 1),
            };
            (reg.id(sym), mi as u32)
        })
        .collect();
    Poly::term(reg, Monomial::from_pairs(reg, pairs), Coefficient::one())
}

fn vandermonde_pair(reg: &Arc<VarRegistry>) -> Poly {
    vandermonde(reg, Side::U).mul(&vandermonde(reg, Side::V))
}

// ---------------------------------------------------------------------------
// Side builders (public so tests can cross-compare identities)
// ---------------------------------------------------------------------------

/// Cauchy determinant, t-graded.  LHS: det of entries sum_{M<=D} (t u_i
/// v_j)^M, truncated at t-degree D.  RHS: V(u)V(v) sum over partitions m
/// with |m| <= D - C(n,2) of t^{|m|+C(n,2)} s_m(u) s_m(v) (the t-power is
/// forced by the Euler grading: every LHS monomial satisfies t-degree =
/// u-degree = v-degree).  Entry truncation at D is exact for the t<=D
/// window because every discarded entry summand already has t-degree > D.
pub fn cauchy_sides(n: usize, d: u32) -> (Poly, Poly) {
    let reg = VarRegistry::new(n, 0);
    let matrix = PolyMatrix::from_fn(&reg, n, |i, j| geometric_entry(&reg, i + 1, j + 1, d));
    let lhs = matrix.det_trunc(Some(d), false);
    let cn2 = choose2u(n as u32);
    let mut rhs = Poly::zero(&reg);
    if d >= cn2 {
        let mut sum = Poly::zero(&reg);
        for m in partitions_upto(n, (d - cn2) as usize) {
            let tpow = Poly::term(
                &reg,
                Monomial::from_pairs(&reg, [(reg.t_id(), weight(&m) as u32 + cn2)]),
                Coefficient::one(),
            );
            sum = sum.add(&tpow.mul(&schur(&reg, &m, Side::U)).mul(&schur(&reg, &m, Side::V)));
        }
        rhs = vandermonde_pair(&reg).mul(&sum);
    }
    (lhs, rhs)
}

/// Frobenius' rational variant.  LHS entries: (1 - c t u_i v_j) *
/// sum_{M<=D} (t u_i v_j)^M with symbolic c; the det is truncated at
/// t-degree D (the boundary artifact of the product at order D+1 falls
/// outside the window).  RHS: V(u)V(v)(1-c)^{n-1} [ sum_{m_n=0} + (1-c)
/// sum_{m_n>0} ] t^{|m|+C(n,2)} s_m(u)s_m(v), over partitions with |m| <=
/// D - C(n,2).
pub fn frobenius_sides(n: usize, d: u32) -> (Poly, Poly) {
    let reg = VarRegistry::new(n, 0);
    let t = reg.t_id();
    let c = reg.c_id();
    let matrix = PolyMatrix::from_fn(&reg, n, |i, j| {
        let geo = geometric_entry(&reg, i + 1, j + 1, d);
        let ctuv = Poly::term(
            &reg,
            Monomial::from_pairs(
                &reg,
                [(c, 1), (t, 1), (reg.id(Sym::U(i + 1)), 1), (reg.id(Sym::V(j + 1)), 1)],
            ),
            Coefficient::one(),
        );
        geo.sub(&ctuv.mul(&geo))
    });
    let lhs = matrix.det_trunc(Some(d), false).t_truncate(d);
    let cn2 = choose2u(n as u32);
    let mut rhs = Poly::zero(&reg);
    if d >= cn2 {
        let one_minus_c = Poly::one(&reg).sub(&Poly::var(&reg, Sym::C));
        let mut zero_tail = Poly::zero(&reg);
        let mut positive_tail = Poly::zero(&reg);
        for m in partitions_upto(n, (d - cn2) as usize) {
            let tpow = Poly::term(
                &reg,
                Monomial::from_pairs(&reg, [(reg.t_id(), weight(&m) as u32 + cn2)]),
                Coefficient::one(),
            );
            let product = tpow
                .mul(&schur(&reg, &m, Side::U))
                .mul(&schur(&reg, &m, Side::V));
            if m[n - 1] == 0 {
                zero_tail = zero_tail.add(&product);
            } else {
                positive_tail = positive_tail.add(&product);
            }
        }
        let bracket = zero_tail.add(&one_minus_c.mul(&positive_tail));
        rhs = vandermonde_pair(&reg)
            .mul(&one_minus_c.pow(n as u32 - 1))
            .mul(&bracket);
    }
    (lhs, rhs)
}

/// Master bosonic identity: the three-way equality e_chi(u) P =
/// e_chibar(v) P = sum_{m, |m| <= D} t^{|m|} (prod f_{m_i}) e_chi(u)(u^m)
/// e_chibar(v)(v^m), with P = prod_i f(t u_i v_i) truncated at t-degree D
/// (factor summands above order D cannot contribute).  Epsilon mode builds
/// P through eps_mul with pre-ordered factors and attaches eps^C(|m|,2) on
/// the right; the scaled flag multiplies all three sides by |G|.
pub fn master_boson_sides(
    group: &Group,
    chi: &Character,
    d: u32,
    epsilon: bool,
    scaled: bool,
) -> (Poly, Poly, Poly) {
    let n = group.n();
    let reg = VarRegistry::new(n, d as usize);
    let p = diag_product(&reg, d, epsilon);
    let a = group.e_chi_apply(chi, Side::U, &p, false);
    let b = group.e_chi_apply(chi, Side::V, &p, true);
    let mut c = Poly::zero(&reg);
    for m in vectors_upto(n, d as usize) {
        let mut pairs = f_vector_pairs(&reg, &m);
        if epsilon {
            pairs.push((reg.eps_id(), choose2u(weight(&m) as u32)));
        }
        let scalar = Poly::term(&reg, Monomial::from_pairs(&reg, pairs), Coefficient::one());
        let eu = group.e_chi_apply(chi, Side::U, &side_power(&reg, &m, Side::U), false);
        if eu.is_zero() {
            continue;
        }
        let ev = group.e_chi_apply(chi, Side::V, &side_power(&reg, &m, Side::V), true);
        c = c.add(&scalar.mul(&eu).mul(&ev));
    }
    if scaled {
        let order = Coefficient::from_int(group.order() as i64);
        (a.scale(&order), b.scale(&order), c.scale(&order))
    } else {
        (a, b, c)
    }
}

/// Determinant expansion.  LHS: det of entries sum_{M <= D+n-1} f_M (t u_i
/// v_j)^M, truncated at t-degree D + C(n,2).  Entry truncation at D+n-1 is
/// exact through that window: an exponent vector with a repeated entry
/// cancels in the alternant (and is discarded atomically), and a distinct
/// vector with sum <= D + C(n,2) has maximum entry <= D + n - 1.  RHS:
/// V(u)V(v) sum over partitions m with |m| <= D of t^{|m|+C(n,2)} (prod_i
/// f_{m_i + n - i}) s_m(u) s_m(v).
pub fn det_expansion_sides(n: usize, d: u32) -> (Poly, Poly) {
    let cap = d + n as u32 - 1;
    let reg = VarRegistry::new(n, cap as usize);
    let cn2 = choose2u(n as u32);
    let matrix = PolyMatrix::from_fn(&reg, n, |i, j| f_series_entry(&reg, i + 1, j + 1, cap, false));
    let lhs = matrix.det_trunc(Some(d + cn2), false);
    let mut sum = Poly::zero(&reg);
    for m in partitions_upto(n, d as usize) {
        let mut pairs = vec![(reg.t_id(), weight(&m) as u32 + cn2)];
        for (i, &mi) in m.iter().enumerate() {
            pairs.push((reg.id(Sym::F(mi + n - 1 - i)), 1));
        }
        let scalar = Poly::term(&reg, Monomial::from_pairs(&reg, pairs), Coefficient::one());
        sum = sum.add(&scalar.mul(&schur(&reg, &m, Side::U)).mul(&schur(&reg, &m, Side::V)));
    }
    let rhs = vandermonde_pair(&reg).mul(&sum);
    (lhs, rhs)
}

/// Permanent expansion, both right-hand forms.  LHS: perm of entries
/// sum_{M<=D} f_M (t u_i v_j)^M at t-degree <= D (no cancellation is needed
/// for exactness: a discarded summand alone exceeds the window).  Middle:
/// (1/n!) sum over all vectors m with |m| <= D of t^{|m|} (prod f_{m_i})
/// perm(u^{o m}) perm(v^{o m}).  Right: sum over partitions of
/// t^{|m|} |Stab(m)| (prod f_{m_i}) m_m(u) m_m(v).
pub fn perm_expansion_sides(n: usize, d: u32) -> (Poly, Poly, Poly) {
    let reg = VarRegistry::new(n, d as usize);
    let matrix = PolyMatrix::from_fn(&reg, n, |i, j| f_series_entry(&reg, i + 1, j + 1, d, false));
    let lhs = matrix.perm_trunc(Some(d), false);
    let inv_nfact = Coefficient::one().div(&coeff_factorial(n));
    let mut middle = Poly::zero(&reg);
    for m in vectors_upto(n, d as usize) {
        let scalar = Poly::term(
            &reg,
            Monomial::from_pairs(&reg, f_vector_pairs(&reg, &m)),
            Coefficient::one(),
        );
        let pu = pow_matrix(&reg, &m, Side::U).perm();
        let pv = pow_matrix(&reg, &m, Side::V).perm();
        middle = middle.add(&scalar.mul(&pu).mul(&pv));
    }
    middle = middle.scale(&inv_nfact);
    let mut right = Poly::zero(&reg);
    for m in partitions_upto(n, d as usize) {
        let scalar = Poly::term(
            &reg,
            Monomial::from_pairs(&reg, f_vector_pairs(&reg, &m)),
            Coefficient::from_int(stab_size(&m) as i64),
        );
        right = right.add(
            &scalar
                .mul(&monomial_sym(&reg, &m, Side::U))
                .mul(&monomial_sym(&reg, &m, Side::V)),
        );
    }
    (lhs, middle, right)
}

/// The multinomial coefficient C(n,2) choose (1, 2, ..., n-1), computed by
/// exact integer division.
pub fn loewner_multinomial(n: usize) -> BigInt {
    let cn2 = n * (n - 1) / 2;
    let mut denom = BigInt::from(1);
    for k in 1..n {
        denom *= factorial_int(k);
    }
    let (q, r) = factorial_int(cn2).div_rem(&denom);
    assert!(r.is_zero(), "staircase multinomial must be integral");
    q
}

/// Loewner's lowest-order determinant.  Delta(t) = det f[t u u^T] is built
/// from the symmetric matrix entries sum_{M <= C(n,2)} f_M t^M u_i^M u_j^M
/// (exact through t <= C(n,2) by the alternant cancellation).  LHS:
/// C(n,2)! * Delta truncated at t-degree C(n,2) -- this packages both the
/// vanishing of every t^j coefficient with j < C(n,2) and the value of the
/// first nonzero one.  RHS: multinomial(C(n,2); 1,...,n-1) * prod_k k! *
/// t^{C(n,2)} * (prod_{k<n} f_k) * V(u)^2.
pub fn loewner_sides(n: usize) -> (Poly, Poly) {
    let cn2 = choose2u(n as u32);
    let reg = VarRegistry::new(n, cn2 as usize);
    let t = reg.t_id();
    let matrix = PolyMatrix::from_fn(&reg, n, |i, j| {
        let ui = reg.id(Sym::U(i + 1));
        let uj = reg.id(Sym::U(j + 1));
        let mut p = Poly::zero(&reg);
        for m in 0..=cn2 {
            p.add_term(
                Monomial::from_pairs(&reg, [(reg.id(Sym::F(m as usize)), 1), (t, m), (ui, m), (uj, m)]),
                &Coefficient::one(),
            );
        }
        p
    });
    let lhs = matrix
        .det_trunc(Some(cn2), false)
        .scale(&coeff_factorial(cn2 as usize));
    let mut coeff = loewner_multinomial(n);
    for k in 0..n {
        coeff *= factorial_int(k);
    }
    let mut pairs = vec![(t, cn2)];
    for k in 0..n {
        pairs.push((reg.id(Sym::F(k)), 1));
    }
    let base = Poly::term(
        &reg,
        Monomial::from_pairs(&reg, pairs),
        Coefficient::from_integer(coeff),
    );
    let vu = vandermonde(&reg, Side::U);
    let rhs = base.mul(&vu).mul(&vu);
    (lhs, rhs)
}

/// Master fermionic identity (three-way): e_chi(u) P = e_chibar(v) P =
/// sum_J sign-or-eps^C(|J|,2) f0^{n-|J|} (f1 t)^{|J|} e_chi(u)(u^J)
/// e_chibar(v)(v^J), with P the linear series product.  No truncation: the
/// exterior algebra is finite.
pub fn master_fermion_sides(
    group: &Group,
    chi: &Character,
    epsilon: bool,
    scaled: bool,
) -> (FermionElem, FermionElem, FermionElem) {
    let n = group.n();
    let p = product_linear_series(n, epsilon);
    let a = e_chi_apply_fermion(group, chi, Side::U, &p, false);
    let b = e_chi_apply_fermion(group, chi, Side::V, &p, true);
    let sreg = fermion::scalar_registry();
    let one = Poly::one(&sreg);
    let f0 = sreg.id(Sym::F(0));
    let f1 = sreg.id(Sym::F(1));
    let mut c = FermionElem::zero(n);
    for jmask in 0..(1u64 << n) as u32 {
        let k = jmask.count_ones();
        let c2 = choose2u(k);
        let mut pairs = vec![(f0, n as u32 - k), (f1, k), (sreg.t_id(), k)];
        let mut coeff = Coefficient::one();
        if epsilon {
            pairs.push((sreg.eps_id(), c2));
        } else if c2 % 2 == 1 {
            coeff = coeff.neg();
        }
        let factor = Poly::term(&sreg, Monomial::from_pairs(&sreg, pairs), coeff);
        let eu = e_chi_apply_fermion(
            group,
            chi,
            Side::U,
            &FermionElem::wedge(n, jmask, 0, one.clone()),
            false,
        );
        if eu.is_zero() {
            continue;
        }
        let ev = e_chi_apply_fermion(
            group,
            chi,
            Side::V,
            &FermionElem::wedge(n, 0, jmask, one.clone()),
            true,
        );
        let product = fermion_mul(&eu, &ev, epsilon);
        c = c.add(&product.map_scalars(|s| s.mul(&factor)));
    }
    if scaled {
        let order = Coefficient::from_int(group.order() as i64);
        (a.scale(&order), b.scale(&order), c.scale(&order))
    } else {
        (a, b, c)
    }
}

/// Fermionic determinant vs its two-layer closed form.
pub fn det_fermion_sides(n: usize, epsilon: bool) -> (FermionElem, FermionElem) {
    (det_fermion(n, epsilon), det_closed_form(n, epsilon))
}

/// Fermionic permanent vs its closed form.  The plain closed form is also
/// correct in epsilon mode: the only surviving t-degrees are 0 and 1, whose
/// crossing count C(k,2) vanishes.
pub fn perm_fermion_sides(n: usize, epsilon: bool) -> (FermionElem, FermionElem) {
    (perm_fermion(n, epsilon), perm_closed_form(n))
}

/// Fermionic product identity: prod_{i,j} (1 + t u_i v_j) in lexicographic
/// factor order vs 1 + t (sum u)(sum v).  Holds in epsilon mode as well.
pub fn product_odd_sides(n: usize, epsilon: bool) -> (FermionElem, FermionElem) {
    (cauchy_product_fermion(n, epsilon), cauchy_closed_form(n))
}

/// Bosonic product identity: prod_{i,j} sum_{M<=D} (t u_i v_j)^M vs
/// sum over partitions m of t^{|m|} s_m(u) s_m(v), both at t-degree <= D.
pub fn product_even_cauchy_sides(n: usize, d: u32) -> (Poly, Poly) {
    let reg = VarRegistry::new(n, 0);
    let mut lhs = Poly::one(&reg);
    for i in 1..=n {
        for j in 1..=n {
            lhs = lhs.mul_trunc(&geometric_entry(&reg, i, j, d), Some(d));
        }
    }
    let mut rhs = Poly::zero(&reg);
    for m in partitions_upto(n, d as usize) {
        let tpow = Poly::term(
            &reg,
            Monomial::from_pairs(&reg, [(reg.t_id(), weight(&m) as u32)]),
            Coefficient::one(),
        );
        rhs = rhs.add(&tpow.mul(&schur(&reg, &m, Side::U)).mul(&schur(&reg, &m, Side::V)));
    }
    (lhs, rhs)
}

/// Dual bosonic product identity: prod_{i,j} (1 + t u_i v_j) vs sum over
/// partitions m inside the n x n box of t^{|m|} s_m(u) s_{m'}(v), both at
/// t-degree <= D (m' is the dual partition; the box constraint keeps it to
/// at most n parts).
pub fn product_even_dual_sides(n: usize, d: u32) -> (Poly, Poly) {
    let reg = VarRegistry::new(n, 0);
    let t = reg.t_id();
    let mut lhs = Poly::one(&reg);
    for i in 1..=n {
        for j in 1..=n {
            let mut factor = Poly::one(&reg);
            factor.add_term(
                Monomial::from_pairs(
                    &reg,
                    [(t, 1), (reg.id(Sym::U(i)), 1), (reg.id(Sym::V(j)), 1)],
                ),
                &Coefficient::one(),
            );
            lhs = lhs.mul_trunc(&factor, Some(d));
        }
    }
    let mut rhs = Poly::zero(&reg);
    for m in partitions_upto(n, d as usize) {
        if m[0] > n {
            continue;
        }
        let dual = dual_partition(&m);
        let tpow = Poly::term(
            &reg,
            Monomial::from_pairs(&reg, [(t, weight(&m) as u32)]),
            Coefficient::one(),
        );
        rhs = rhs.add(&tpow.mul(&schur(&reg, &m, Side::U)).mul(&schur(&reg, &dual, Side::V)));
    }
    (lhs, rhs)
}

/// Epsilon-commuting bosonic master display (trivial group): the diagonal
/// product normal-ordered in eps mode vs sum over all vectors m of
/// eps^C(|m|,2) t^{|m|} (prod f_{m_i}) u^m v^m, |m| <= D.
pub fn epsilon_master_boson_sides(n: usize, d: u32) -> (Poly, Poly) {
    let reg = VarRegistry::new(n, d as usize);
    let lhs = diag_product(&reg, d, true);
    let mut rhs = Poly::zero(&reg);
    for m in vectors_upto(n, d as usize) {
        let mut pairs = f_vector_pairs(&reg, &m);
        pairs.push((reg.eps_id(), choose2u(weight(&m) as u32)));
        for (i, &mi) in m.iter().enumerate() {
            pairs.push((reg.id(Sym::U(i + 1)), mi as u32));
            pairs.push((reg.id(Sym::V(i + 1)), mi as u32));
        }
        rhs.add_term(Monomial::from_pairs(&reg, pairs), &Coefficient::one());
    }
    (lhs, rhs)
}

/// Epsilon-commuting bosonic determinant.  LHS: det in eps mode (entries
/// pre-normal-ordered, rows combined in order with eps_mul) with entries
/// truncated at D+n-1 and t-degree at D+C(n,2).  RHS: V(u)V(v) sum over
/// partitions m with |m| <= D of eps^C(|m|+C(n,2),2) t^{|m|+C(n,2)}
/// (prod f_{m_i+n-i}) s_m(u)s_m(v).  The eps exponent is C(k,2) at total
/// t-degree k because a term of t-degree k in any row-ordered product of
/// balanced factors performs exactly C(k,2) v-past-u moves.
pub fn epsilon_det_boson_sides(n: usize, d: u32) -> (Poly, Poly) {
    let cap = d + n as u32 - 1;
    let reg = VarRegistry::new(n, cap as usize);
    let cn2 = choose2u(n as u32);
    let matrix = PolyMatrix::from_fn(&reg, n, |i, j| f_series_entry(&reg, i + 1, j + 1, cap, true));
    let lhs = matrix.det_trunc(Some(d + cn2), true);
    let mut sum = Poly::zero(&reg);
    for m in partitions_upto(n, d as usize) {
        let k = weight(&m) as u32 + cn2;
        let mut pairs = vec![(reg.t_id(), k), (reg.eps_id(), choose2u(k))];
        for (i, &mi) in m.iter().enumerate() {
            pairs.push((reg.id(Sym::F(mi + n - 1 - i)), 1));
        }
        let scalar = Poly::term(&reg, Monomial::from_pairs(&reg, pairs), Coefficient::one());
        sum = sum.add(&scalar.mul(&schur(&reg, &m, Side::U)).mul(&schur(&reg, &m, Side::V)));
    }
    let rhs = vandermonde_pair(&reg).mul(&sum);
    (lhs, rhs)
}

// ---------------------------------------------------------------------------
// Comparison plumbing
// ---------------------------------------------------------------------------

struct Comparison {
    lhs_terms: usize,
    rhs_terms: usize,
    difference: Vec<String>,
}

fn cap_terms(mut terms: Vec<String>) -> Vec<String> {
    terms.truncate(DIFFERENCE_CAP);
    terms
}

fn compare_polys(lhs: &Poly, rhs: &Poly) -> Comparison {
    Comparison {
        lhs_terms: lhs.num_terms(),
        rhs_terms: rhs.num_terms(),
        difference: cap_terms(lhs.sub(rhs).canonical_terms()),
    }
}

fn compare_poly_chain(sides: &[Poly]) -> Comparison {
    let mut difference = Vec::new();
    for pair in sides.windows(2) {
        let diff = pair[0].sub(&pair[1]);
        if !diff.is_zero() {
            difference = cap_terms(diff.canonical_terms());
            break;
        }
    }
    Comparison {
        lhs_terms: sides.first().map_or(0, Poly::num_terms),
        rhs_terms: sides.last().map_or(0, Poly::num_terms),
        difference,
    }
}

fn compare_fermions(lhs: &FermionElem, rhs: &FermionElem) -> Comparison {
    Comparison {
        lhs_terms: lhs.num_terms(),
        rhs_terms: rhs.num_terms(),
        difference: cap_terms(lhs.sub(rhs).canonical_terms()),
    }
}

fn compare_fermion_chain(sides: &[FermionElem]) -> Comparison {
    let mut difference = Vec::new();
    for pair in sides.windows(2) {
        let diff = pair[0].sub(&pair[1]);
        if !diff.is_zero() {
            difference = cap_terms(diff.canonical_terms());
            break;
        }
    }
    Comparison {
        lhs_terms: sides.first().map_or(0, FermionElem::num_terms),
        rhs_terms: sides.last().map_or(0, FermionElem::num_terms),
        difference,
    }
}

fn merge_comparisons(parts: Vec<Comparison>) -> Comparison {
    let lhs_terms = parts.iter().map(|p| p.lhs_terms).sum();
    let rhs_terms = parts.iter().map(|p| p.rhs_terms).sum();
    let difference = parts
        .into_iter()
        .map(|p| p.difference)
        .find(|d| !d.is_empty())
        .unwrap_or_default();
    Comparison {
        lhs_terms,
        rhs_terms,
        difference,
    }
}

// ---------------------------------------------------------------------------
// Verifier dispatch
// ---------------------------------------------------------------------------

/// Verify one case exactly.  `max_group_size` bounds subgroup closures when
/// the case names a group (builtin or file).
pub fn verify_case(case: &IdentityCase, max_group_size: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    if case.n == 0 {
        return Err(Error::Usage("n must be at least 1".to_string()));
    }
    let n = case.n;
    let d = case.degree;
    let comparison = match case.identity {
        IdentityName::Cauchy => {
            let (lhs, rhs) = cauchy_sides(n, d);
            compare_polys(&lhs, &rhs)
        }
        IdentityName::Frobenius => {
            let (lhs, rhs) = frobenius_sides(n, d);
            compare_polys(&lhs, &rhs)
        }
        IdentityName::MasterBoson => {
            let (group, table) = resolve_group(&case.group, n, max_group_size)?;
            let chi = resolve_character(&group, &table, &case.character)?;
            let (a, b, c) = master_boson_sides(&group, &chi, d, case.epsilon, case.scaled);
            compare_poly_chain(&[a, b, c])
        }
        IdentityName::DetExpansion => {
            let (lhs, rhs) = det_expansion_sides(n, d);
            compare_polys(&lhs, &rhs)
        }
        IdentityName::PermExpansion => {
            let (lhs, middle, rhs) = perm_expansion_sides(n, d);
            compare_poly_chain(&[lhs, middle, rhs])
        }
        IdentityName::Loewner => {
            let (lhs, rhs) = loewner_sides(n);
            compare_polys(&lhs, &rhs)
        }
        IdentityName::MasterFermion => {
            let (group, table) = resolve_group(&case.group, n, max_group_size)?;
            let chi = resolve_character(&group, &table, &case.character)?;
            let (a, b, c) = master_fermion_sides(&group, &chi, case.epsilon, case.scaled);
            compare_fermion_chain(&[a, b, c])
        }
        IdentityName::DetFermion => {
            let (lhs, rhs) = det_fermion_sides(n, case.epsilon);
            compare_fermions(&lhs, &rhs)
        }
        IdentityName::PermFermion => {
            let (lhs, rhs) = perm_fermion_sides(n, case.epsilon);
            compare_fermions(&lhs, &rhs)
        }
        IdentityName::Products => {
            let (fl, fr) = product_odd_sides(n, case.epsilon);
            let (cl, cr) = product_even_cauchy_sides(n, d);
            let (dl, dr) = product_even_dual_sides(n, d);
            merge_comparisons(vec![
                compare_fermions(&fl, &fr),
                compare_polys(&cl, &cr),
                compare_polys(&dl, &dr),
            ])
        }
        IdentityName::Epsilon => epsilon_comparison(n, d),
    };
    let status = if comparison.difference.is_empty() {
        Status::Verified
    } else {
        Status::Mismatch
    };
    Ok(VerificationReport {
        case: case.clone(),
        status,
        difference: comparison.difference,
        lhs_terms: comparison.lhs_terms,
        rhs_terms: comparison.rhs_terms,
        ms: start.elapsed().as_millis() as u64,
    })
}

/// The four eps-display checks plus the two cheap specializations
/// (eps -> 1 recovers the plain bosonic product; eps -> -1 recovers the
/// plain fermionic one).
fn epsilon_comparison(n: usize, d: u32) -> Comparison {
    let (boson_master_lhs, boson_master_rhs) = epsilon_master_boson_sides(n, d);
    let (boson_det_lhs, boson_det_rhs) = epsilon_det_boson_sides(n, d);
    let fermion_master_lhs = product_linear_series(n, true);
    let fermion_master_rhs = linear_series_closed_form(n, true);
    let (fermion_det_lhs, fermion_det_rhs) = det_fermion_sides(n, true);

    let reg = boson_master_lhs.registry().clone();
    let eps_to_one = boson_master_lhs.substitute_one(reg.eps_id(), &Poly::one(&reg));
    let plain_product = diag_product(&reg, d, false);
    let minus_one = Coefficient::from_int(-1);
    let eps_to_minus = fermion_master_lhs.specialize_eps(&minus_one);
    let plain_series = product_linear_series(n, false);

    merge_comparisons(vec![
        compare_polys(&boson_master_lhs, &boson_master_rhs),
        compare_polys(&boson_det_lhs, &boson_det_rhs),
        compare_fermions(&fermion_master_lhs, &fermion_master_rhs),
        compare_fermions(&fermion_det_lhs, &fermion_det_rhs),
        Comparison {
            lhs_terms: 0,
            rhs_terms: 0,
            difference: cap_terms(eps_to_one.sub(&plain_product).canonical_terms()),
        },
        Comparison {
            lhs_terms: 0,
            rhs_terms: 0,
            difference: cap_terms(eps_to_minus.sub(&plain_series).canonical_terms()),
        },
    ])
}

/// Run a batch of cases (in parallel when a rayon pool is available),
/// collecting reports in case order.
pub fn run_cases(cases: &[IdentityCase], max_group_size: usize) -> Vec<Result<VerificationReport>> {
    cases
        .par_iter()
        .map(|case| verify_case(case, max_group_size))
        .collect()
}
