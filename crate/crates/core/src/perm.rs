//! Permutations of {1, ..., n}: composition, inverse, sign, cycle type,
//! and one-line notation. Stored 0-based internally; all parsing and
//! display is 1-based.

use crate::{Error, Result};
use itertools::Itertools;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm {
    map: Vec<usize>, // map[i] = image of i, 0-based
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm { map: (0..n).collect() }
    }

    /// Parse one-line notation with 1-based entries, e.g. [2,1,3] = (1 2).
    pub fn from_one_line(images: &[usize]) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut map = Vec::with_capacity(n);
        for &x in images {
            if x < 1 || x > n {
                return Err(Error::Usage(format!(
                    "permutation entry {} out of range 1..={}",
                    x, n
                )));
            }
            if seen[x - 1] {
                return Err(Error::Usage(format!(
                    "permutation repeats the entry {}",
                    x
                )));
            }
            seen[x - 1] = true;
            map.push(x - 1);
        }
        Ok(Perm { map })
    }

    /// Build from disjoint cycles with 1-based entries, e.g.
    /// from_cycles(4, &[vec![1,2], vec![3,4]]) = (1 2)(3 4).
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
        let mut map: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for w in 0..cycle.len() {
                let a = cycle[w];
                let b = cycle[(w + 1) % cycle.len()];
                if a < 1 || a > n {
                    return Err(Error::Usage(format!(
                        "cycle entry {} out of range 1..={}",
                        a, n
                    )));
                }
                if touched[a - 1] {
                    return Err(Error::Usage(format!(
                        "cycles are not disjoint at {}",
                        a
                    )));
                }
                touched[a - 1] = true;
                map[a - 1] = b - 1;
            }
        }
        Ok(Perm { map })
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// Image of i (0-based).
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// One-line notation, 1-based.
    pub fn one_line(&self) -> Vec<usize> {
        self.map.iter().map(|&x| x + 1).collect()
    }

    /// (self . other)(i) = self(other(i)): apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n(), "permutation degrees differ");
        Perm {
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut map = vec![0; self.n()];
        for (i, &j) in self.map.iter().enumerate() {
            map[j] = i;
        }
        Perm { map }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Cycle lengths in descending order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut lens = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.map[i];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// Number of pairs i < j with image(i) > image(j) (Coxeter length).
    pub fn inversions(&self) -> usize {
        let mut count = 0;
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                if self.map[i] > self.map[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// +1 for even permutations, -1 for odd.
    pub fn sign(&self) -> i64 {
        let cycles = self.cycle_type().len();
        if (self.n() - cycles).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Multiplicative order.
    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut p = self.clone();
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }

    /// All n! permutations in ascending (lexicographic one-line) order.
    pub fn all(n: usize) -> Vec<Perm> {
        (0..n)
            .permutations(n)
            .map(|map| Perm { map })
            .collect()
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]",
            self.one_line().iter().map(|x| x.to_string()).join(",")
        )
    }
}
