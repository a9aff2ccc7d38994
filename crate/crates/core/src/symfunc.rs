//! Partitions and multi-indices, Vandermonde products, Schur polynomials
//! via the bialternant ratio, monomial symmetric polynomials, dual
//! partitions, and stabilizer sizes.

use crate::coeff::Coefficient;
use crate::group::Side;
use crate::matrix::PolyMatrix;
use crate::poly::{Monomial, Poly};
use crate::vars::{Sym, VarRegistry};
use itertools::Itertools;
use std::collections::BTreeSet;
use std::sync::Arc;

/// All weakly decreasing tuples of length n with weight <= max_weight,
/// in ascending lexicographic order: (0,...,0) first.
pub fn partitions_upto(n: usize, max_weight: usize) -> Vec<Vec<usize>> {
    fn rec(
        slots: usize,
        budget: usize,
        max_part: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if slots == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in 0..=budget.min(max_part) {
            prefix.push(p);
            rec(slots - 1, budget - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_weight, max_weight, &mut Vec::new(), &mut out);
    // first parts ascend in generation order and ties recurse the same
    // way, so the output is already lex-ascending
    out
}

pub fn weight(m: &[usize]) -> usize {
    m.iter().sum()
}

/// The variable symbol for position j (1-based) on a side.
pub fn side_sym(side: Side, j: usize) -> Sym {
    match side {
        Side::U => Sym::U(j),
        Side::V => Sym::V(j),
    }
}

/// prod over i < j of (x_j - x_i); the empty product at n = 1.
pub fn vandermonde(reg: &Arc<VarRegistry>, side: Side) -> Poly {
    let n = reg.n();
    let mut p = Poly::one(reg);
    for i in 1..=n {
        for j in (i + 1)..=n {
            let factor = Poly::var(reg, side_sym(side, j)).sub(&Poly::var(reg, side_sym(side, i)));
            p = p.mul(&factor);
        }
    }
    p
}

/// Entry (i, j) = x_j^(m_i): each row raises every side variable to that
/// row's exponent.
pub fn pow_matrix(reg: &Arc<VarRegistry>, m: &[usize], side: Side) -> PolyMatrix {
    let n = reg.n();
    assert_eq!(m.len(), n, "multi-index length {} != n = {}", m.len(), n);
    PolyMatrix::from_fn(reg, n, |i, j| {
        Poly::term(
            reg,
            Monomial::from_syms(reg, &[(side_sym(side, j + 1), m[i] as u32)]),
            Coefficient::one(),
        )
    })
}

/// det(pow_matrix(m)): the alternant of a multi-index.
pub fn alternant(reg: &Arc<VarRegistry>, m: &[usize], side: Side) -> Poly {
    pow_matrix(reg, m, side).det()
}

/// The staircase (n-1, n-2, ..., 1, 0).
pub fn staircase(n: usize) -> Vec<usize> {
    (0..n).map(|i| n - 1 - i).collect()
}

fn pad(m: &[usize], n: usize) -> Vec<usize> {
    assert!(m.len() <= n, "partition has more than n = {} parts", n);
    let mut v = m.to_vec();
    v.resize(n, 0);
    v
}

/// Schur polynomial by the bialternant ratio
/// det(x_j^(m_i + n - i)) / det(x_j^(n - i)); the division is exact.
pub fn schur(reg: &Arc<VarRegistry>, m: &[usize], side: Side) -> Poly {
    let n = reg.n();
    let m = pad(m, n);
    assert!(
        m.windows(2).all(|w| w[0] >= w[1]),
        "schur needs a weakly decreasing partition"
    );
    let delta = staircase(n);
    let shifted: Vec<usize> = m.iter().zip(&delta).map(|(a, b)| a + b).collect();
    alternant(reg, &shifted, side).divide_exact(&alternant(reg, &delta, side))
}

/// Sum of the distinct monomials x^sigma(m) over rearrangements sigma(m).
pub fn monomial_sym(reg: &Arc<VarRegistry>, m: &[usize], side: Side) -> Poly {
    let n = reg.n();
    let m = pad(m, n);
    let distinct: BTreeSet<Vec<usize>> = m
        .iter()
        .copied()
        .permutations(n)
        .map(|p| p.to_vec())
        .collect();
    let mut out = Poly::zero(reg);
    for exps in distinct {
        let mono = Monomial::from_pairs(
            reg,
            exps.iter()
                .enumerate()
                .map(|(j, &e)| (reg.id(side_sym(side, j + 1)), e as u32)),
        );
        out.add_term(mono, &Coefficient::one());
    }
    out
}

/// |Stab_{S_n}(m)| = product over distinct values (zeros included) of
/// (multiplicity)!.
pub fn stab_size(m: &[usize]) -> u64 {
    let mut sorted = m.to_vec();
    sorted.sort_unstable();
    let mut total: u64 = 1;
    let mut run = 0u64;
    for i in 0..sorted.len() {
        run += 1;
        let last = i + 1 == sorted.len() || sorted[i + 1] != sorted[i];
        if last {
            total *= (1..=run).product::<u64>();
            run = 0;
        }
    }
    total
}

/// Conjugate Young diagram: m'_k = #{i : m_i >= k}; trailing zeros drop.
pub fn dual_partition(m: &[usize]) -> Vec<usize> {
    let max = m.iter().copied().max().unwrap_or(0);
    (1..=max).map(|k| m.iter().filter(|&&p| p >= k).count()).collect()
}
