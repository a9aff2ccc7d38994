//! Explicit permutation subgroups of S_n with conjugacy classes,
//! built-in character tables (symmetric, alternating, cyclic,
//! trivial/sign), file-loaded character tables, and the symmetrizer
//! e_chi acting on polynomials.

use crate::coeff::{euler_phi, Coefficient};
use crate::perm::Perm;
use crate::poly::{Monomial, Poly};
use crate::{Error, Result};
use num::{BigRational, FromPrimitive};
use std::collections::HashMap;
use std::fmt;

/// Which block of variables a permutation or symmetrizer acts on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    U,
    V,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::U => "u",
            Side::V => "v",
        })
    }
}

/// A subgroup of S_n given by its full element list, with conjugacy
/// classes ordered by their lexicographically least representative (the
/// identity's class is always class 0).
#[derive(Clone, Debug)]
pub struct Group {
    n: usize,
    elements: Vec<Perm>, // sorted ascending; elements[0] = identity
    index: HashMap<Perm, usize>,
    inv: Vec<usize>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>, // element indices, each sorted ascending
}

/// Default cap on subgroup closure size (|S_8|).
pub const DEFAULT_MAX_GROUP_SIZE: usize = 40320;

impl Group {
    /// Close a generating set under composition. Errors with a resource
    /// error when the subgroup would exceed `max_size` elements.
    pub fn closure(n: usize, gens: &[Perm], max_size: usize) -> Result<Group> {
        for g in gens {
            if g.n() != n {
                return Err(Error::Usage(format!(
                    "generator {} does not permute {{1..{}}}",
                    g, n
                )));
            }
        }
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        let mut order: Vec<Perm> = vec![Perm::identity(n)];
        seen.insert(Perm::identity(n), ());
        let mut head = 0;
        while head < order.len() {
            let p = order[head].clone();
            head += 1;
            for g in gens {
                let q = g.compose(&p);
                if !seen.contains_key(&q) {
                    if order.len() >= max_size {
                        return Err(Error::Resource(format!(
                            "subgroup closure exceeded the maximum size {}",
                            max_size
                        )));
                    }
                    seen.insert(q.clone(), ());
                    order.push(q);
                }
            }
        }
        Ok(Group::build(n, order, gens.to_vec()))
    }

    /// The full symmetric group S_n (n <= 8).
    pub fn symmetric(n: usize) -> Group {
        assert!((1..=8).contains(&n), "built-in S_n supports 1 <= n <= 8");
        let gens = if n >= 2 {
            vec![
                Perm::from_cycles(n, &[vec![1, 2]]).unwrap(),
                Perm::from_cycles(n, &[(1..=n).collect()]).unwrap(),
            ]
        } else {
            vec![]
        };
        Group::build(n, Perm::all(n), gens)
    }

    /// The alternating group A_n (n <= 8).
    pub fn alternating(n: usize) -> Group {
        assert!((1..=8).contains(&n), "built-in A_n supports 1 <= n <= 8");
        let elems: Vec<Perm> = Perm::all(n).into_iter().filter(|p| p.sign() == 1).collect();
        // A_n is generated by the 3-cycles (1 2 k)
        let gens: Vec<Perm> = (3..=n)
            .map(|k| Perm::from_cycles(n, &[vec![1, 2, k]]).unwrap())
            .collect();
        Group::build(n, elems, gens)
    }

    /// The cyclic group generated by the n-cycle (1 2 ... n).
    pub fn cyclic(n: usize) -> Group {
        assert!(n >= 1, "cyclic group needs n >= 1");
        let gen = Perm::from_cycles(n, &[(1..=n).collect()]).unwrap();
        let mut elems = Vec::with_capacity(n);
        let mut cur = Perm::identity(n);
        for _ in 0..n {
            elems.push(cur.clone());
            cur = gen.compose(&cur);
        }
        let gens = if n > 1 { vec![gen] } else { vec![] };
        Group::build(n, elems, gens)
    }

    /// `gens` must generate the element set; it drives the conjugacy-orbit
    /// computation (conjugating by generators suffices to exhaust a class).
    fn build(n: usize, mut elements: Vec<Perm>, gens: Vec<Perm>) -> Group {
        elements.sort();
        elements.dedup();
        assert!(
            elements[0].is_identity(),
            "group element list lacks the identity"
        );
        let index: HashMap<Perm, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let inv: Vec<usize> = elements.iter().map(|p| index[&p.inverse()]).collect();
        let gen_invs: Vec<Perm> = gens.iter().map(Perm::inverse).collect();

        let mut class_of = vec![usize::MAX; elements.len()];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for start in 0..elements.len() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let cid = classes.len();
            let mut members = vec![start];
            class_of[start] = cid;
            let mut head = 0;
            while head < members.len() {
                let x = elements[members[head]].clone();
                head += 1;
                for (g, ginv) in gens.iter().zip(&gen_invs) {
                    let y = g.compose(&x).compose(ginv);
                    let yi = index[&y];
                    if class_of[yi] == usize::MAX {
                        class_of[yi] = cid;
                        members.push(yi);
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        // iterating starts in ascending element order makes each new class's
        // least element the scan index, so classes are already ordered by
        // their lexicographically least representative
        Group { n, elements, index, inv, class_of, classes }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inv[i]
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, elem_index: usize) -> usize {
        self.class_of[elem_index]
    }

    pub fn class_members(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    pub fn class_size(&self, c: usize) -> usize {
        self.classes[c].len()
    }

    pub fn class_rep(&self, c: usize) -> &Perm {
        &self.elements[self.classes[c][0]]
    }

    pub fn centralizer_size(&self, c: usize) -> usize {
        self.order() / self.class_size(c)
    }

    /// Lexicographically least element of full order |G|, if any.
    pub fn cyclic_generator(&self) -> Option<&Perm> {
        self.elements.iter().find(|p| p.order() == self.order())
    }

    /// The symmetrizer e_chi = (chi(1)/|G|) sum_g w(g) act(g^{-1}, -),
    /// with w = chi, or its conjugate when `conjugate` is set. Idempotent
    /// for irreducible chi.
    pub fn e_chi_apply(&self, chi: &Character, side: Side, p: &Poly, conjugate: bool) -> Poly {
        assert_eq!(
            chi.num_classes(),
            self.class_count(),
            "character not defined on all classes of the group"
        );
        let mut sum = Poly::zero(p.registry());
        for i in 0..self.order() {
            let w = chi.value(self.class_of[i]);
            let w = if conjugate { w.conj() } else { w.clone() };
            if w.is_zero() {
                continue;
            }
            let acted = act_on_poly(&self.elements[self.inv[i]], p, side);
            sum = sum.add(&acted.scale(&w));
        }
        let norm = chi
            .degree()
            .mul(&Coefficient::rational(1, self.order() as i64));
        sum.scale(&norm)
    }
}

/// Relabel the side's variables by g: u_i -> u_{g(i)} (or v_i -> v_{g(i)}).
pub fn act_on_poly(g: &Perm, p: &Poly, side: Side) -> Poly {
    let reg = p.registry();
    let n = reg.n();
    assert_eq!(
        g.n(),
        n,
        "permutation degree {} does not match registry n {}",
        g.n(),
        n
    );
    let mut out = Poly::zero(reg);
    for (m, c) in p.iter() {
        let pairs: Vec<(u32, u32)> = m
            .exps()
            .iter()
            .map(|&(id, e)| {
                let i = id as usize;
                let nid = match side {
                    Side::U if i < n => g.apply(i) as u32,
                    Side::V if i >= n && i < 2 * n => (n + g.apply(i - n)) as u32,
                    _ => id,
                };
                (nid, e)
            })
            .collect();
        out.add_term(Monomial::from_pairs(reg, pairs), c);
    }
    out
}

/// A class function on a Group: one value per conjugacy class, in class
/// order.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    name: String,
    values: Vec<Coefficient>,
    irreducible: bool,
}

impl Character {
    pub fn new(name: impl Into<String>, values: Vec<Coefficient>, irreducible: bool) -> Character {
        assert!(!values.is_empty(), "character needs at least one class value");
        Character { name: name.into(), values, irreducible }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// chi(1), the value on the identity class.
    pub fn degree(&self) -> &Coefficient {
        &self.values[0]
    }

    pub fn value(&self, class: usize) -> &Coefficient {
        &self.values[class]
    }

    pub fn values(&self) -> &[Coefficient] {
        &self.values
    }

    pub fn num_classes(&self) -> usize {
        self.values.len()
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible
    }

    /// Largest conductor appearing among the values.
    pub fn conductor(&self) -> u32 {
        self.values.iter().map(Coefficient::conductor).max().unwrap_or(1)
    }

    /// All-ones character (any group).
    pub fn trivial(group: &Group) -> Character {
        Character::new(
            "trivial",
            vec![Coefficient::one(); group.class_count()],
            true,
        )
    }

    /// Permutation sign restricted to the group (any subgroup of S_n).
    pub fn sign(group: &Group) -> Character {
        let values = (0..group.class_count())
            .map(|c| Coefficient::from_int(group.class_rep(c).sign()))
            .collect();
        Character::new("sign", values, true)
    }
}

/// All partitions of n in descending lexicographic order, (n) first and
/// (1,...,1) last; each partition is weakly decreasing with no zeros.
pub fn partitions_desc(n: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=remaining.min(max_part)).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn partition_name(lambda: &[usize]) -> String {
    format!(
        "[{}]",
        lambda
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

/// Border-strip (Murnaghan-Nakayama) recursion on first-column hook
/// lengths ("beta sets"): removing a strip of size k from the shape is
/// moving one beta value down by k into an unoccupied slot; the sign is
/// the parity of the number of occupied slots jumped over.
fn mn_recurse(
    lambda: &[usize],
    mu: &[usize],
    memo: &mut HashMap<(Vec<usize>, Vec<usize>), i64>,
) -> i64 {
    if mu.is_empty() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let k = mu[0];
    let rest = &mu[1..];
    let l = lambda.len();
    let beta: Vec<usize> = (0..l).map(|i| lambda[i] + (l - 1 - i)).collect();
    let mut total = 0i64;
    for i in 0..l {
        let b = beta[i];
        if b < k {
            continue;
        }
        let target = b - k;
        if beta.contains(&target) {
            continue;
        }
        let height = beta.iter().filter(|&&x| target < x && x < b).count();
        let sign = if height % 2 == 0 { 1 } else { -1 };
        let mut nb = beta.clone();
        nb[i] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let mut nl: Vec<usize> = (0..l).map(|p| nb[p] - (l - 1 - p)).collect();
        while nl.last() == Some(&0) {
            nl.pop();
        }
        total += sign * mn_recurse(&nl, rest, memo);
    }
    memo.insert(key, total);
    total
}

/// Irreducible S_n character value chi_lambda on the class of cycle type
/// mu. Both arguments are partitions of the same n.
pub fn sn_character_value(lambda: &[usize], cycle_type: &[usize]) -> i64 {
    let mut lam: Vec<usize> = lambda.iter().copied().filter(|&p| p > 0).collect();
    lam.sort_unstable_by(|a, b| b.cmp(a));
    let mut mu: Vec<usize> = cycle_type.iter().copied().filter(|&p| p > 0).collect();
    mu.sort_unstable_by(|a, b| b.cmp(a));
    assert_eq!(
        lam.iter().sum::<usize>(),
        mu.iter().sum::<usize>(),
        "partition and cycle type have different weights"
    );
    let mut memo = HashMap::new();
    mn_recurse(&lam, &mu, &mut memo)
}

/// Value of chi_lambda on a specific permutation.
pub fn sn_character(lambda: &[usize], class_rep: &Perm) -> Coefficient {
    Coefficient::from_int(sn_character_value(lambda, &class_rep.cycle_type()))
}

/// The full irreducible character table of S_n, rows indexed by
/// partitions in descending lexicographic order ((n) = trivial first,
/// (1,...,1) = sign last), named "[3,1]" style.
pub fn sn_characters(group: &Group) -> Vec<Character> {
    let n = group.n();
    let nfact: usize = (1..=n).product();
    assert_eq!(
        group.order(),
        nfact,
        "the partition-indexed table needs the full symmetric group"
    );
    let types: Vec<Vec<usize>> = (0..group.class_count())
        .map(|c| group.class_rep(c).cycle_type())
        .collect();
    let mut memo = HashMap::new();
    partitions_desc(n)
        .into_iter()
        .map(|lam| {
            let values = types
                .iter()
                .map(|mu| Coefficient::from_int(mn_recurse(&lam, mu, &mut memo)))
                .collect();
            Character::new(partition_name(&lam), values, true)
        })
        .collect()
}

/// The |G| linear characters of a cyclic group: chi_j(g^m) =
/// zeta_|G|^(jm) for a fixed generator g, named "chi0", "chi1", ....
/// Errors when the group is not cyclic.
pub fn cyclic_characters(group: &Group) -> Result<Vec<Character>> {
    let gen = group.cyclic_generator().ok_or_else(|| {
        Error::Usage(
            "group is not cyclic; built-in characters unavailable (provide a character file)"
                .to_string(),
        )
    })?;
    let order = group.order();
    // discrete log: element index -> exponent m with element = gen^m
    let mut power_of = vec![0usize; order];
    let mut cur = Perm::identity(group.n());
    for m in 0..order {
        power_of[group.index_of(&cur).unwrap()] = m;
        cur = gen.compose(&cur);
    }
    // cyclic groups are abelian: every class is a singleton
    let class_power: Vec<usize> = (0..group.class_count())
        .map(|c| power_of[group.class_members(c)[0]])
        .collect();
    Ok((0..order)
        .map(|j| {
            let values = class_power
                .iter()
                .map(|&m| Coefficient::root_of_unity(order as u32, (j * m) as i64))
                .collect();
            Character::new(format!("chi{}", j), values, true)
        })
        .collect())
}

fn parse_rational(s: &str) -> Result<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| Error::Usage(format!("cannot parse '{}' as a rational a/b", s)))
}

fn parse_value(v: &serde_json::Value, conductor: u32, ctx: &str) -> Result<Coefficient> {
    match v {
        serde_json::Value::String(s) => Ok(Coefficient::from_rational(parse_rational(s)?)),
        serde_json::Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| {
                Error::Usage(format!("{}: numeric value {} is not an integer", ctx, n))
            })?;
            Ok(Coefficient::from_int(i))
        }
        serde_json::Value::Array(arr) => {
            let phi = euler_phi(conductor);
            if arr.len() != phi {
                return Err(Error::Usage(format!(
                    "{}: cyclotomic value needs {} coordinates for conductor {}, got {}",
                    ctx,
                    phi,
                    conductor,
                    arr.len()
                )));
            }
            let mut coords = Vec::with_capacity(phi);
            for x in arr {
                let s = x.as_str().ok_or_else(|| {
                    Error::Usage(format!("{}: coordinates must be strings like \"a/b\"", ctx))
                })?;
                coords.push(parse_rational(s)?);
            }
            Ok(Coefficient::from_coords(conductor, coords))
        }
        other => Err(Error::Usage(format!(
            "{}: unsupported value encoding {}",
            ctx, other
        ))),
    }
}

#[derive(serde::Deserialize)]
struct TableFile {
    n: usize,
    generators: Vec<Vec<usize>>,
    #[serde(default = "default_conductor")]
    conductor: u32,
    characters: Vec<TableChar>,
}

fn default_conductor() -> u32 {
    1
}

fn default_true() -> bool {
    true
}

#[derive(serde::Deserialize)]
struct TableChar {
    name: String,
    degree: i64,
    values: Vec<serde_json::Value>,
    #[serde(default = "default_true")]
    irreducible: bool,
}

/// Load a character table from JSON text:
/// { "n": int, "generators": [[one-line perms, 1-based]],
///   "conductor": N, "characters": [ { "name", "degree",
///   "values": per class in class order, "irreducible"? } ] }.
/// Values are "a/b" strings, or lists of phi(N) "a/b" strings giving
/// power-basis coordinates in Q(zeta_N). Classes are ordered by their
/// least representative, matching `Group`'s ordering.
pub fn character_table_load(text: &str, max_group_size: usize) -> Result<(Group, Vec<Character>)> {
    let file: TableFile = serde_json::from_str(text)
        .map_err(|e| Error::Usage(format!("character table parse error: {}", e)))?;
    if file.n == 0 {
        return Err(Error::Usage("character table has n = 0".to_string()));
    }
    let mut gens = Vec::with_capacity(file.generators.len());
    for g in &file.generators {
        gens.push(Perm::from_one_line(g)?);
    }
    let group = Group::closure(file.n, &gens, max_group_size)?;
    let k = group.class_count();
    let order = BigRational::from_usize(group.order()).unwrap();
    let mut chars = Vec::with_capacity(file.characters.len());
    for tc in &file.characters {
        if tc.values.len() != k {
            return Err(Error::Usage(format!(
                "character '{}': expected {} class values, got {}",
                tc.name,
                k,
                tc.values.len()
            )));
        }
        let mut values = Vec::with_capacity(k);
        for (c, v) in tc.values.iter().enumerate() {
            let ctx = format!("character '{}', class {}", tc.name, c);
            values.push(parse_value(v, file.conductor, &ctx)?);
        }
        match values[0].as_rational() {
            Some(d) if *d == BigRational::from_i64(tc.degree).unwrap() => {}
            _ => {
                return Err(Error::Usage(format!(
                    "character '{}': identity-class value {} does not equal the declared degree {}",
                    tc.name,
                    values[0].canonical_string(),
                    tc.degree
                )));
            }
        }
        if tc.irreducible {
            // sum over g of |chi(g)|^2 = |G| for irreducible characters
            let mut norm = Coefficient::zero();
            for (c, value) in values.iter().enumerate() {
                let size = Coefficient::from_int(group.class_size(c) as i64);
                norm = norm.add(&value.abs2().mul(&size));
            }
            let ok = norm.as_rational().map(|r| *r == order).unwrap_or(false);
            if !ok {
                return Err(Error::Usage(format!(
                    "character '{}': sum of class_size*|chi|^2 is {}, expected the group order {}",
                    tc.name,
                    norm.canonical_string(),
                    group.order()
                )));
            }
        }
        chars.push(Character::new(tc.name.clone(), values, tc.irreducible));
    }
    Ok((group, chars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vars::{Sym, VarRegistry};

    fn table_values(chars: &[Character]) -> Vec<Vec<String>> {
        chars
            .iter()
            .map(|ch| ch.values().iter().map(|c| c.canonical_string()).collect())
            .collect()
    }

    #[test]
    fn s3_structure() {
        let g = Group::symmetric(3);
        assert_eq!(g.order(), 6);
        assert_eq!(g.class_count(), 3);
        // classes ordered by least rep: identity, transpositions, 3-cycles
        assert_eq!(g.class_rep(0).one_line(), vec![1, 2, 3]);
        assert_eq!(g.class_rep(1).one_line(), vec![1, 3, 2]);
        assert_eq!(g.class_rep(2).one_line(), vec![2, 3, 1]);
        assert_eq!(g.class_size(0), 1);
        assert_eq!(g.class_size(1), 3);
        assert_eq!(g.class_size(2), 2);
    }

    #[test]
    fn closure_builds_c4_and_respects_cap() {
        let c = Perm::from_one_line(&[2, 3, 4, 1]).unwrap();
        let g = Group::closure(4, std::slice::from_ref(&c), 100).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.class_count(), 4); // abelian: singleton classes
        match Group::closure(4, &[c], 3) {
            Err(Error::Resource(_)) => {}
            other => panic!("expected a resource error, got {:?}", other.map(|g| g.order())),
        }
    }

    #[test]
    fn alternating_groups() {
        let a3 = Group::alternating(3);
        assert_eq!(a3.order(), 3);
        assert_eq!(a3.class_count(), 3); // cyclic of order 3
        let a4 = Group::alternating(4);
        assert_eq!(a4.order(), 12);
        assert_eq!(a4.class_count(), 4); // e, (12)(34), two 3-cycle classes
        assert!(a4.elements().iter().all(|p| p.sign() == 1));
    }

    #[test]
    fn s3_character_table_frozen() {
        let g = Group::symmetric(3);
        let chars = sn_characters(&g);
        assert_eq!(
            chars.iter().map(Character::name).collect::<Vec<_>>(),
            vec!["[3]", "[2,1]", "[1,1,1]"]
        );
        // classes: e, transpositions, 3-cycles
        assert_eq!(
            table_values(&chars),
            vec![
                vec!["1", "1", "1"],
                vec!["2", "0", "-1"],
                vec!["1", "-1", "1"],
            ]
        );
    }

    #[test]
    fn s4_character_table_frozen() {
        let g = Group::symmetric(4);
        let chars = sn_characters(&g);
        // classes by least rep: e, transpositions, 3-cycles,
        // double transpositions, 4-cycles
        assert_eq!(g.class_rep(1).cycle_type(), vec![2, 1, 1]);
        assert_eq!(g.class_rep(2).cycle_type(), vec![3, 1]);
        assert_eq!(g.class_rep(3).cycle_type(), vec![2, 2]);
        assert_eq!(g.class_rep(4).cycle_type(), vec![4]);
        assert_eq!(
            table_values(&chars),
            vec![
                vec!["1", "1", "1", "1", "1"],
                vec!["3", "1", "0", "-1", "-1"],
                vec!["2", "0", "-1", "2", "0"],
                vec!["3", "-1", "0", "-1", "1"],
                vec!["1", "-1", "1", "1", "-1"],
            ]
        );
    }

    #[test]
    fn extreme_partitions_are_trivial_and_sign() {
        for n in 1..=5 {
            let g = Group::symmetric(n);
            let triv = Character::trivial(&g);
            let sgn = Character::sign(&g);
            for c in 0..g.class_count() {
                let mu = g.class_rep(c).cycle_type();
                assert_eq!(sn_character_value(&[n], &mu), 1);
                let ones = vec![1usize; n];
                assert_eq!(
                    Coefficient::from_int(sn_character_value(&ones, &mu)),
                    *sgn.value(c)
                );
                assert_eq!(*triv.value(c), Coefficient::one());
            }
        }
    }

    #[test]
    fn regular_representation_decomposition() {
        // sum over irreducibles of chi(1) * chi(g) = |G| at g = e, else 0
        for n in 2..=5 {
            let g = Group::symmetric(n);
            let chars = sn_characters(&g);
            for c in 0..g.class_count() {
                let total: i64 = chars
                    .iter()
                    .map(|ch| {
                        let d = ch.degree().as_rational().unwrap().to_integer();
                        let v = ch.value(c).as_rational().unwrap().to_integer();
                        i64::try_from(d * v).unwrap()
                    })
                    .sum();
                let expected = if c == 0 { g.order() as i64 } else { 0 };
                assert_eq!(total, expected, "n={} class {}", n, c);
            }
        }
    }

    #[test]
    fn column_orthogonality_s5() {
        let g = Group::symmetric(5);
        let chars = sn_characters(&g);
        for c1 in 0..g.class_count() {
            for c2 in 0..g.class_count() {
                let mut total = Coefficient::zero();
                for ch in &chars {
                    total = total.add(&ch.value(c1).mul(&ch.value(c2).conj()));
                }
                let expected = if c1 == c2 {
                    Coefficient::from_int(g.centralizer_size(c1) as i64)
                } else {
                    Coefficient::zero()
                };
                assert_eq!(total, expected, "classes {} {}", c1, c2);
            }
        }
    }

    #[test]
    fn cyclic_characters_c4() {
        let g = Group::cyclic(4);
        let chars = cyclic_characters(&g).unwrap();
        assert_eq!(chars.len(), 4);
        // singleton classes come out in power order e, g, g^2, g^3, so
        // chi_j reads [1, zeta^j, zeta^2j, zeta^3j]
        assert_eq!(table_values(&chars), vec![
            vec!["1", "1", "1", "1"],
            vec!["1", "[0,1]", "-1", "[0,-1]"],
            vec!["1", "-1", "1", "-1"],
            vec!["1", "[0,-1]", "-1", "[0,1]"],
        ]);
        // orthogonality of chi1 against chi3 over the group
        let mut dot = Coefficient::zero();
        for c in 0..4 {
            dot = dot.add(&chars[1].value(c).mul(&chars[3].value(c).conj()));
        }
        assert!(dot.is_zero());
        // non-cyclic group refuses
        assert!(cyclic_characters(&Group::symmetric(3)).is_err());
    }

    #[test]
    fn act_on_poly_relabels_one_side() {
        let reg = VarRegistry::new(3, 0);
        let u1v1 = Poly::term(
            &reg,
            Monomial::from_syms(&reg, &[(Sym::U(1), 1), (Sym::V(1), 1)]),
            Coefficient::one(),
        );
        let swap = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
        let acted = act_on_poly(&swap, &u1v1, Side::U);
        let expected = Poly::term(
            &reg,
            Monomial::from_syms(&reg, &[(Sym::U(2), 1), (Sym::V(1), 1)]),
            Coefficient::one(),
        );
        assert_eq!(acted, expected);

        let cyc = Perm::from_cycles(3, &[vec![1, 2, 3]]).unwrap();
        let p = Poly::term(
            &reg,
            Monomial::from_syms(&reg, &[(Sym::U(1), 1), (Sym::U(2), 2)]),
            Coefficient::one(),
        );
        let acted = act_on_poly(&cyc, &p, Side::U);
        let expected = Poly::term(
            &reg,
            Monomial::from_syms(&reg, &[(Sym::U(2), 1), (Sym::U(3), 2)]),
            Coefficient::one(),
        );
        assert_eq!(acted, expected);
        // the V-side is untouched by a U-side action
        assert_eq!(act_on_poly(&cyc, &u1v1, Side::V).coeff(&Monomial::from_syms(
            &reg,
            &[(Sym::U(1), 1), (Sym::V(2), 1)]
        )), Coefficient::one());
    }

    #[test]
    fn symmetrizer_averages_and_is_idempotent() {
        let reg = VarRegistry::new(2, 0);
        let g = Group::symmetric(2);
        let u1 = Poly::var(&reg, Sym::U(1));
        let u2 = Poly::var(&reg, Sym::U(2));
        let half = Coefficient::rational(1, 2);
        let triv = Character::trivial(&g);
        let e = g.e_chi_apply(&triv, Side::U, &u1, false);
        assert_eq!(e, u1.add(&u2).scale(&half));
        let sgn = Character::sign(&g);
        let e = g.e_chi_apply(&sgn, Side::U, &u1, false);
        assert_eq!(e, u1.sub(&u2).scale(&half));

        // idempotency for a degree-2 character on a random-ish input
        let g3 = Group::symmetric(3);
        let reg3 = VarRegistry::new(3, 1);
        let chars = sn_characters(&g3);
        let std_char = &chars[1];
        let p = Poly::var(&reg3, Sym::U(1))
            .mul(&Poly::var(&reg3, Sym::U(2)))
            .add(&Poly::var(&reg3, Sym::U(3)).scale(&Coefficient::rational(2, 3)))
            .add(&Poly::var(&reg3, Sym::V(2)).mul(&Poly::var(&reg3, Sym::T)));
        let once = g3.e_chi_apply(std_char, Side::U, &p, false);
        let twice = g3.e_chi_apply(std_char, Side::U, &once, false);
        assert_eq!(once, twice);
        // conjugate flag on a rational table is the same operator
        assert_eq!(g3.e_chi_apply(std_char, Side::U, &p, true), once);
    }

    #[test]
    fn character_file_round_trip_c3() {
        let text = r#"{
            "n": 3,
            "generators": [[2, 3, 1]],
            "conductor": 3,
            "characters": [
                {"name": "chi0", "degree": 1, "values": ["1", "1", "1"]},
                {"name": "chi1", "degree": 1, "values": ["1", ["0", "1"], ["-1", "-1"]]},
                {"name": "chi2", "degree": 1, "values": ["1", ["-1", "-1"], ["0", "1"]]}
            ]
        }"#;
        let (group, chars) = character_table_load(text, 100).unwrap();
        assert_eq!(group.order(), 3);
        assert_eq!(chars.len(), 3);
        // matches the built-in cyclic table up to lifting rationals
        let builtin = cyclic_characters(&group).unwrap();
        for (a, b) in chars.iter().zip(&builtin) {
            for c in 0..3 {
                assert!(a.value(c).sub(b.value(c)).is_zero(), "{} class {}", a.name(), c);
            }
        }
    }

    #[test]
    fn character_file_matches_recursion_for_s3() {
        let text = r#"{
            "n": 3,
            "generators": [[2, 1, 3], [2, 3, 1]],
            "conductor": 1,
            "characters": [
                {"name": "trivial", "degree": 1, "values": [1, 1, 1]},
                {"name": "standard", "degree": 2, "values": ["2", "0", "-1"]},
                {"name": "sign", "degree": 1, "values": ["1", "-1", "1"]}
            ]
        }"#;
        let (group, chars) = character_table_load(text, 100).unwrap();
        assert_eq!(group.order(), 6);
        let builtin = sn_characters(&group);
        for (a, b) in chars.iter().zip(&builtin) {
            assert_eq!(a.values(), b.values(), "{}", a.name());
        }
    }

    #[test]
    fn character_file_validation_errors() {
        // wrong number of class values
        let short = r#"{"n": 3, "generators": [[2, 1, 3], [2, 3, 1]],
            "characters": [{"name": "x", "degree": 1, "values": ["1", "1"]}]}"#;
        assert!(matches!(
            character_table_load(short, 100),
            Err(Error::Usage(m)) if m.contains("expected 3 class values")
        ));
        // degree mismatch
        let deg = r#"{"n": 2, "generators": [[2, 1]],
            "characters": [{"name": "x", "degree": 2, "values": ["1", "1"]}]}"#;
        assert!(matches!(
            character_table_load(deg, 100),
            Err(Error::Usage(m)) if m.contains("degree")
        ));
        // norm failure: the regular character is not irreducible
        let norm = r#"{"n": 2, "generators": [[2, 1]],
            "characters": [{"name": "reg", "degree": 2, "values": ["2", "0"]}]}"#;
        assert!(matches!(
            character_table_load(norm, 100),
            Err(Error::Usage(m)) if m.contains("expected the group order")
        ));
        // the same table is accepted when flagged reducible
        let ok = r#"{"n": 2, "generators": [[2, 1]],
            "characters": [{"name": "reg", "degree": 2, "values": ["2", "0"],
                            "irreducible": false}]}"#;
        assert!(character_table_load(ok, 100).is_ok());
        // closure cap
        let big = r#"{"n": 4, "generators": [[2, 1, 3, 4], [2, 3, 4, 1]],
            "characters": []}"#;
        assert!(matches!(
            character_table_load(big, 10),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn euler_weight_preserved_by_action() {
        let reg = VarRegistry::new(3, 0);
        let p = Poly::term(
            &reg,
            Monomial::from_syms(&reg, &[(Sym::U(1), 2), (Sym::V(2), 1), (Sym::V(3), 1)]),
            Coefficient::rational(5, 3),
        );
        assert!(p.euler_weight_check());
        let cyc = Perm::from_cycles(3, &[vec![1, 3, 2]]).unwrap();
        assert!(act_on_poly(&cyc, &p, Side::U).euler_weight_check());
        assert!(act_on_poly(&cyc, &p, Side::V).euler_weight_check());
    }
}
