//! Variable registry: the fixed symbol layout u_1..u_n, v_1..v_n, t, c,
//! eps, f_0..f_fmax. The position in this layout is the canonical variable
//! id, which pins monomial ordering and serialization.

use std::sync::Arc;

pub type VarId = u32;

/// A symbol in the registry. `U`/`V` indices are 1-based (matching the
/// printed names u1..un, v1..vn); `F` indices are 0-based series orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sym {
    U(usize),
    V(usize),
    T,
    C,
    Eps,
    F(usize),
}

/// Immutable symbol table. Layout: `n` u-variables, `n` v-variables, then
/// t, c, eps, then `fmax + 1` series coefficients f_0..f_fmax.
#[derive(Debug, PartialEq, Eq)]
pub struct VarRegistry {
    n: usize,
    fmax: usize,
}

impl VarRegistry {
    pub fn new(n: usize, fmax: usize) -> Arc<VarRegistry> {
        Arc::new(VarRegistry { n, fmax })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fmax(&self) -> usize {
        self.fmax
    }

    pub fn num_vars(&self) -> usize {
        2 * self.n + 3 + self.fmax + 1
    }

    pub fn id(&self, sym: Sym) -> VarId {
        let idx = match sym {
            Sym::U(i) => {
                assert!(1 <= i && i <= self.n, "u{} out of range", i);
                i - 1
            }
            Sym::V(j) => {
                assert!(1 <= j && j <= self.n, "v{} out of range", j);
                self.n + j - 1
            }
            Sym::T => 2 * self.n,
            Sym::C => 2 * self.n + 1,
            Sym::Eps => 2 * self.n + 2,
            Sym::F(m) => {
                assert!(m <= self.fmax, "f{} out of range", m);
                2 * self.n + 3 + m
            }
        };
        idx as VarId
    }

    pub fn sym(&self, id: VarId) -> Sym {
        let id = id as usize;
        assert!(id < self.num_vars(), "variable id out of range");
        if id < self.n {
            Sym::U(id + 1)
        } else if id < 2 * self.n {
            Sym::V(id - self.n + 1)
        } else if id == 2 * self.n {
            Sym::T
        } else if id == 2 * self.n + 1 {
            Sym::C
        } else if id == 2 * self.n + 2 {
            Sym::Eps
        } else {
            Sym::F(id - 2 * self.n - 3)
        }
    }

    pub fn name(&self, id: VarId) -> String {
        match self.sym(id) {
            Sym::U(i) => format!("u{}", i),
            Sym::V(j) => format!("v{}", j),
            Sym::T => "t".to_string(),
            Sym::C => "c".to_string(),
            Sym::Eps => "eps".to_string(),
            Sym::F(m) => format!("f{}", m),
        }
    }

    /// Rank deciding the factor order inside a printed monomial:
    /// f's first (ascending), then c, eps, t, then u's, then v's —
    /// "f1*t*u1*v1" style.
    pub fn display_rank(&self, id: VarId) -> (u8, usize) {
        match self.sym(id) {
            Sym::F(m) => (0, m),
            Sym::C => (1, 0),
            Sym::Eps => (2, 0),
            Sym::T => (3, 0),
            Sym::U(i) => (4, i),
            Sym::V(j) => (5, j),
        }
    }

    pub fn t_id(&self) -> VarId {
        (2 * self.n) as VarId
    }

    pub fn c_id(&self) -> VarId {
        (2 * self.n + 1) as VarId
    }

    pub fn eps_id(&self) -> VarId {
        (2 * self.n + 2) as VarId
    }

    pub fn is_u(&self, id: VarId) -> bool {
        (id as usize) < self.n
    }

    pub fn is_v(&self, id: VarId) -> bool {
        let id = id as usize;
        self.n <= id && id < 2 * self.n
    }

    pub fn is_f(&self, id: VarId) -> bool {
        (id as usize) >= 2 * self.n + 3
    }
}
