//! Sparse multivariate polynomials over `Coefficient`: exact ring
//! arithmetic, t-degree truncation, substitution, exact division, and the
//! canonical graded-lex serialization used by the CLI.

use crate::coeff::Coefficient;
use crate::vars::{Sym, VarId, VarRegistry};
use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// A monomial: sparse exponent vector sorted by variable id, with cached
/// total degree and t-degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<(VarId, u32)>,
    total: u32,
    tdeg: u32,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial { exps: vec![], total: 0, tdeg: 0 }
    }

    /// Build from (id, exponent) pairs in any order; duplicates merge and
    /// zeros are dropped.
    pub fn from_pairs(reg: &VarRegistry, pairs: impl IntoIterator<Item = (VarId, u32)>) -> Monomial {
        let mut exps: Vec<(VarId, u32)> = Vec::new();
        for (id, e) in pairs {
            if e == 0 {
                continue;
            }
            assert!((id as usize) < reg.num_vars(), "variable id out of range");
            match exps.iter_mut().find(|(i, _)| *i == id) {
                Some((_, cur)) => *cur += e,
                None => exps.push((id, e)),
            }
        }
        exps.sort_unstable_by_key(|&(id, _)| id);
        let total = exps.iter().map(|&(_, e)| e).sum();
        let tdeg = exps
            .iter()
            .find(|&&(id, _)| id == reg.t_id())
            .map(|&(_, e)| e)
            .unwrap_or(0);
        Monomial { exps, total, tdeg }
    }

    pub fn from_syms(reg: &VarRegistry, pairs: &[(Sym, u32)]) -> Monomial {
        Monomial::from_pairs(reg, pairs.iter().map(|&(s, e)| (reg.id(s), e)))
    }

    pub fn degree(&self) -> u32 {
        self.total
    }

    pub fn t_degree(&self) -> u32 {
        self.tdeg
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exps(&self) -> &[(VarId, u32)] {
        &self.exps
    }

    pub fn exp_of(&self, id: VarId) -> u32 {
        self.exps
            .iter()
            .find(|&&(i, _)| i == id)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    /// Product of two monomials (exponents add; caches add).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (ia, ea) = self.exps[i];
            let (ib, eb) = other.exps[j];
            match ia.cmp(&ib) {
                Ordering::Less => {
                    exps.push((ia, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push((ib, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((ia, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[i..]);
        exps.extend_from_slice(&other.exps[j..]);
        Monomial {
            exps,
            total: self.total + other.total,
            tdeg: self.tdeg + other.tdeg,
        }
    }

    /// Exact monomial quotient, or None when some exponent would go
    /// negative.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        let mut j = 0;
        for &(id, e) in &self.exps {
            let mut e = e;
            if j < other.exps.len() && other.exps[j].0 < id {
                return None; // divisor has a variable we lack
            }
            if j < other.exps.len() && other.exps[j].0 == id {
                let eb = other.exps[j].1;
                if eb > e {
                    return None;
                }
                e -= eb;
                j += 1;
            }
            if e > 0 {
                exps.push((id, e));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        let total = exps.iter().map(|&(_, e)| e).sum();
        let tdeg = self.tdeg - other.tdeg;
        Some(Monomial { exps, total, tdeg })
    }

    pub fn u_degree(&self, reg: &VarRegistry) -> u32 {
        self.exps
            .iter()
            .filter(|&&(id, _)| reg.is_u(id))
            .map(|&(_, e)| e)
            .sum()
    }

    pub fn v_degree(&self, reg: &VarRegistry) -> u32 {
        self.exps
            .iter()
            .filter(|&&(id, _)| reg.is_v(id))
            .map(|&(_, e)| e)
            .sum()
    }

    fn string(&self, reg: &VarRegistry) -> String {
        let mut factors: Vec<(u8, usize, String)> = self
            .exps
            .iter()
            .map(|&(id, e)| {
                let (block, pos) = reg.display_rank(id);
                let s = if e == 1 {
                    reg.name(id)
                } else {
                    format!("{}^{}", reg.name(id), e)
                };
                (block, pos, s)
            })
            .collect();
        factors.sort_by_key(|a| (a.0, a.1));
        factors
            .into_iter()
            .map(|(_, _, s)| s)
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Graded lexicographic order: total degree first; within a degree, the
/// first differing variable id (ascending) decides, with the HIGHER
/// exponent ranking SMALLER. This is graded lex with later ids more
/// significant, a genuine monomial order, and it makes serialized output
/// read naturally (u1 before u2, low t-powers first).
impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        match self.total.cmp(&other.total) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.exps.get(i), other.exps.get(j)) {
                (None, None) => return Ordering::Equal,
                // `self` still has a variable where `other` has exponent 0
                // at that id: higher exponent earlier ranks smaller.
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some(&(ia, ea)), Some(&(ib, eb))) => {
                    if ia < ib {
                        return Ordering::Less;
                    }
                    if ia > ib {
                        return Ordering::Greater;
                    }
                    if ea != eb {
                        return if ea > eb { Ordering::Less } else { Ordering::Greater };
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial: monomial -> nonzero coefficient, tied to a
/// registry. Operations between different registries panic.
#[derive(Clone)]
pub struct Poly {
    reg: Arc<VarRegistry>,
    terms: HashMap<Monomial, Coefficient>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Poly) -> bool {
        self.reg == other.reg && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(reg: &Arc<VarRegistry>) -> Poly {
        Poly { reg: reg.clone(), terms: HashMap::new() }
    }

    pub fn one(reg: &Arc<VarRegistry>) -> Poly {
        Poly::constant(reg, Coefficient::one())
    }

    pub fn constant(reg: &Arc<VarRegistry>, c: Coefficient) -> Poly {
        let mut p = Poly::zero(reg);
        p.add_term(Monomial::one(), &c);
        p
    }

    pub fn var(reg: &Arc<VarRegistry>, sym: Sym) -> Poly {
        Poly::term(reg, Monomial::from_syms(reg, &[(sym, 1)]), Coefficient::one())
    }

    pub fn term(reg: &Arc<VarRegistry>, mono: Monomial, c: Coefficient) -> Poly {
        let mut p = Poly::zero(reg);
        p.add_term(mono, &c);
        p
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> Coefficient {
        self.terms.get(mono).cloned().unwrap_or_else(Coefficient::zero)
    }

    fn check_reg(&self, other: &Poly) {
        assert!(self.reg == other.reg, "mixed variable registries");
    }

    /// Add c * mono, pruning a resulting zero.
    pub fn add_term(&mut self, mono: Monomial, c: &Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Occupied(mut o) => {
                o.get_mut().add_in_place(c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_reg(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check_reg(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &c.neg());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, a: &Coefficient) -> Poly {
        if a.is_zero() {
            return Poly::zero(&self.reg);
        }
        let mut out = Poly::zero(&self.reg);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.mul(a));
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_trunc(other, None)
    }

    /// Product with every monomial of t-degree > `tmax` dropped (when
    /// `tmax` is Some). Pairs are pruned before multiplying, so truncated
    /// inputs give the same result as truncating afterwards.
    pub fn mul_trunc(&self, other: &Poly, tmax: Option<u32>) -> Poly {
        self.check_reg(other);
        let mut out = Poly::zero(&self.reg);
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                if let Some(d) = tmax {
                    if ma.t_degree() + mb.t_degree() > d {
                        continue;
                    }
                }
                out.add_term(ma.mul(mb), &ca.mul(cb));
            }
        }
        out
    }

    /// eps-twisted product: commuting variables, except that multiplying a
    /// left factor with v-degree b by a right factor with u-degree a
    /// contributes eps^(b*a) (each v in the left operand exchanges past
    /// each u in the right operand).
    pub fn eps_mul(&self, other: &Poly, tmax: Option<u32>) -> Poly {
        self.check_reg(other);
        let eps = self.reg.eps_id();
        let mut out = Poly::zero(&self.reg);
        for (ma, ca) in &self.terms {
            let vdeg = ma.v_degree(&self.reg);
            for (mb, cb) in &other.terms {
                if let Some(d) = tmax {
                    if ma.t_degree() + mb.t_degree() > d {
                        continue;
                    }
                }
                let udeg = mb.u_degree(&self.reg);
                let mut m = ma.mul(mb);
                let cross = vdeg * udeg;
                if cross > 0 {
                    m = m.mul(&Monomial::from_pairs(&self.reg, [(eps, cross)]));
                }
                out.add_term(m, &ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(&self.reg);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Substitute polynomials for variables; ids absent from `subs` stay as
    /// themselves. Homomorphic: substitute(p*q) = substitute(p)*substitute(q).
    pub fn substitute(&self, subs: &HashMap<VarId, Poly>) -> Poly {
        for p in subs.values() {
            self.check_reg(p);
        }
        let mut powers: HashMap<(VarId, u32), Poly> = HashMap::new();
        let mut out = Poly::zero(&self.reg);
        for (m, c) in &self.terms {
            let mut residual: Vec<(VarId, u32)> = Vec::new();
            let mut acc: Option<Poly> = None;
            for &(id, e) in m.exps() {
                if let Some(rep) = subs.get(&id) {
                    let p = powers
                        .entry((id, e))
                        .or_insert_with(|| rep.pow(e))
                        .clone();
                    acc = Some(match acc {
                        None => p,
                        Some(a) => a.mul(&p),
                    });
                } else {
                    residual.push((id, e));
                }
            }
            let base = Poly::term(
                &self.reg,
                Monomial::from_pairs(&self.reg, residual),
                c.clone(),
            );
            let term = match acc {
                None => base,
                Some(a) => base.mul(&a),
            };
            out = out.add(&term);
        }
        out
    }

    pub fn substitute_one(&self, id: VarId, p: &Poly) -> Poly {
        let mut map = HashMap::new();
        map.insert(id, p.clone());
        self.substitute(&map)
    }

    /// The polynomial multiplying t^k, with the t-power removed.
    pub fn coeff_of_t(&self, k: u32) -> Poly {
        let t = self.reg.t_id();
        let mut out = Poly::zero(&self.reg);
        for (m, c) in &self.terms {
            if m.t_degree() == k {
                let stripped = Monomial::from_pairs(
                    &self.reg,
                    m.exps().iter().copied().filter(|&(id, _)| id != t),
                );
                out.add_term(stripped, c);
            }
        }
        out
    }

    /// Drop all monomials of t-degree > d.
    pub fn t_truncate(&self, d: u32) -> Poly {
        let mut out = Poly::zero(&self.reg);
        for (m, c) in &self.terms {
            if m.t_degree() <= d {
                out.add_term(m.clone(), c);
            }
        }
        out
    }

    pub fn max_t_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::t_degree).max().unwrap_or(0)
    }

    /// True iff every monomial has equal total u-degree and v-degree,
    /// i.e. p lies in the kernel of the difference of Euler operators.
    pub fn euler_weight_check(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.u_degree(&self.reg) == m.v_degree(&self.reg))
    }

    /// Leading (maximal) term in the monomial order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Coefficient)> {
        self.terms.iter().max_by(|a, b| a.0.cmp(b.0))
    }

    /// Exact polynomial division; panics if the division is not exact
    /// (that is an internal error in this crate, never a user error).
    pub fn divide_exact(&self, divisor: &Poly) -> Poly {
        self.check_reg(divisor);
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let (dm, dc) = {
            let (m, c) = divisor.leading_term().unwrap();
            (m.clone(), c.clone())
        };
        let dc_inv = dc.inv();
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.reg);
        while !rem.is_zero() {
            let (lm, lc) = {
                let (m, c) = rem.leading_term().unwrap();
                (m.clone(), c.clone())
            };
            let qm = lm
                .div(&dm)
                .unwrap_or_else(|| panic!("non-exact division (internal error)"));
            let qc = lc.mul(&dc_inv);
            let qterm = Poly::term(&self.reg, qm, qc);
            rem = rem.sub(&qterm.mul(divisor));
            quot = quot.add(&qterm);
        }
        quot
    }

    /// Terms in ascending canonical order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Coefficient)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// Each term as a standalone signed string, ascending order.
    pub fn canonical_terms(&self) -> Vec<String> {
        self.sorted_terms()
            .into_iter()
            .map(|(m, c)| term_string(&self.reg, m, c))
            .collect()
    }

    /// Canonical human form: "a + b - c", ascending monomial order.
    pub fn canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, s) in self.canonical_terms().into_iter().enumerate() {
            if i == 0 {
                out.push_str(&s);
            } else if let Some(rest) = s.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&s);
            }
        }
        out
    }
}

fn term_string(reg: &VarRegistry, m: &Monomial, c: &Coefficient) -> String {
    let cs = c.canonical_string();
    if m.is_one() {
        return cs;
    }
    let ms = m.string(reg);
    if cs == "1" {
        ms
    } else if cs == "-1" {
        format!("-{}", ms)
    } else {
        format!("{}*{}", cs, ms)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.canonical_string())
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::sub(self, rhs)
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}
