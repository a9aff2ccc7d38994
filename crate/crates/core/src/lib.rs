//! Exact symbolic verification of determinant, permanent, and immanant
//! expansion identities in commuting (bosonic), anticommuting (fermionic),
//! and eps-commuting variables.
//!
//! All arithmetic is exact: scalars live in a cyclotomic field Q(zeta_N)
//! (N = 1 is plain Q), polynomials are sparse maps from monomials in
//! u_1..u_n, v_1..v_n, t, c, eps, f_0..f_D to such scalars, and every
//! identity is checked by expanding both sides independently and asserting
//! that the difference is the zero element. No floating point anywhere.

pub mod coeff;
pub mod fermion;
pub mod group;
pub mod identities;
pub mod matrix;
pub mod perm;
pub mod poly;
pub mod symfunc;
pub mod vars;

pub use coeff::Coefficient;
pub use fermion::FermionElem;
pub use group::{Character, Group, Side};
pub use identities::{
    resolve_character, resolve_group, run_cases, verify_case, IdentityCase, IdentityName, Status,
    VerificationReport,
};
pub use matrix::PolyMatrix;
pub use perm::Perm;
pub use poly::{Monomial, Poly};
pub use vars::{Sym, VarRegistry};

/// Errors surfaced to callers (and mapped to CLI exit codes).
///
/// Internal inconsistencies (mixed registries, non-exact division) are
/// programming errors and panic instead.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Bad input: unparsable flag values, malformed character files,
    /// out-of-range indices, unknown names.
    #[error("{0}")]
    Usage(String),
    /// A configured resource limit was exceeded (e.g. subgroup closure
    /// larger than max-group-size).
    #[error("{0}")]
    Resource(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
