//! Exact double-coset Hecke rings for congruence subgroups of SL₂(Z).
//!
//! The crate decomposes double cosets ΓaΓ into right cosets, multiplies them
//! in the Hecke ring with full combinatorial witnesses, models Γ-products of
//! anchored bi-Γ-sets, checks the associated bimodule identities on finitely
//! supported functions, and realizes Hecke operators as integer matrices on
//! weight-2 modular symbols for Γ₀(N).

pub mod arith;
pub mod bimodule;
pub mod bisets;
pub mod congruence;
pub mod cosets;
pub mod error;
pub mod hecke_ring;
pub mod linalg;
pub mod modsym;
pub mod oracle;
pub mod random;
pub mod report;
pub mod suites;

pub use arith::{GroupElement, Rational, SmithForm};
pub use congruence::{CongruenceSubgroup, GroupKind};
pub use cosets::{decompose, CosetDecomposition};
pub use error::{Error, Result};
