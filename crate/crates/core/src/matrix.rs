//! Square matrices of polynomials: determinant and permanent by subset
//! dynamic programming over column masks, and general character-weighted
//! immanants by direct permutation sum.

use crate::group::{Character, Group};
use crate::poly::Poly;
use crate::vars::VarRegistry;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct PolyMatrix {
    reg: Arc<VarRegistry>,
    n: usize,
    rows: Vec<Vec<Poly>>,
}

impl PolyMatrix {
    pub fn new(reg: &Arc<VarRegistry>, rows: Vec<Vec<Poly>>) -> PolyMatrix {
        let n = rows.len();
        for row in &rows {
            assert_eq!(row.len(), n, "matrix is not square");
            for p in row {
                assert!(p.registry() == reg, "mixed variable registries");
            }
        }
        PolyMatrix { reg: reg.clone(), n, rows }
    }

    pub fn from_fn(
        reg: &Arc<VarRegistry>,
        n: usize,
        mut f: impl FnMut(usize, usize) -> Poly,
    ) -> PolyMatrix {
        let rows = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        PolyMatrix::new(reg, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.rows[i][j]
    }

    pub fn det(&self) -> Poly {
        self.det_trunc(None, false)
    }

    pub fn perm(&self) -> Poly {
        self.perm_trunc(None, false)
    }

    pub fn det_trunc(&self, tmax: Option<u32>, eps: bool) -> Poly {
        self.expand(true, tmax, eps)
    }

    pub fn perm_trunc(&self, tmax: Option<u32>, eps: bool) -> Poly {
        self.expand(false, tmax, eps)
    }

    /// Subset DP: dp[mask] is the (signed) sum over assignments of rows
    /// 0..popcount(mask)-1 to the columns in mask, entries multiplied in
    /// row order (which makes the eps-twisted product well defined).
    /// Placing row r at column j adds one inversion per already-used
    /// column above j, hence the popcount(mask >> (j+1)) sign.
    fn expand(&self, signed: bool, tmax: Option<u32>, eps: bool) -> Poly {
        if self.n == 0 {
            return Poly::one(&self.reg);
        }
        let full = 1usize << self.n;
        let mut dp: Vec<Option<Poly>> = vec![None; full];
        dp[0] = Some(Poly::one(&self.reg));
        for mask in 1..full {
            let r = mask.count_ones() as usize - 1;
            let mut acc = Poly::zero(&self.reg);
            for j in 0..self.n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let prev = dp[mask ^ (1 << j)].as_ref().unwrap();
                if prev.is_zero() {
                    continue;
                }
                let entry = &self.rows[r][j];
                let mut term = if eps {
                    prev.eps_mul(entry, tmax)
                } else {
                    prev.mul_trunc(entry, tmax)
                };
                if signed && (mask >> (j + 1)).count_ones() % 2 == 1 {
                    term = term.neg();
                }
                acc = acc.add(&term);
            }
            dp[mask] = Some(acc);
        }
        dp[full - 1].take().unwrap()
    }

    /// Character-weighted permutation sum over an explicit subgroup:
    /// sum over sigma in G of chi(sigma) * prod_i M[i][sigma(i)].
    /// The sign (resp. trivial) character of S_n recovers det (resp. perm).
    pub fn immanant(&self, group: &Group, chi: &Character) -> Poly {
        self.immanant_trunc(group, chi, None, false)
    }

    pub fn immanant_trunc(
        &self,
        group: &Group,
        chi: &Character,
        tmax: Option<u32>,
        eps: bool,
    ) -> Poly {
        assert_eq!(
            group.n(),
            self.n,
            "group degree {} does not match matrix size {}",
            group.n(),
            self.n
        );
        assert_eq!(
            chi.num_classes(),
            group.class_count(),
            "character not defined on all classes of the group"
        );
        let mut total = Poly::zero(&self.reg);
        for (i, sigma) in group.elements().iter().enumerate() {
            let w = chi.value(group.class_of(i));
            if w.is_zero() {
                continue;
            }
            let mut prod = Poly::one(&self.reg);
            for r in 0..self.n {
                let entry = &self.rows[r][sigma.apply(r)];
                prod = if eps {
                    prod.eps_mul(entry, tmax)
                } else {
                    prod.mul_trunc(entry, tmax)
                };
                if prod.is_zero() {
                    break;
                }
            }
            total = total.add(&prod.scale(w));
        }
        total
    }
}
