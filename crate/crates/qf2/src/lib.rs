//! Exact quadratic-form arithmetic over computable characteristic-2 field
//! towers: type normalization, Witt decomposition, an isotropy engine based
//! on residue forms, Arf/Clifford invariants, norm degree, Pfister-neighbor
//! tests, and a classifier deciding isotropy of 5-dimensional type-(1,3)
//! forms over function fields of quadrics.

pub mod classifier;
pub mod f2linear;
pub mod corpus;
pub mod field;
pub mod gf;
pub mod pfister;
pub mod poly;
pub mod algebra;
pub mod quadform;
pub mod verdict;

pub use field::{El, FieldError, Tower};
pub use gf::Gf;
pub use poly::MPoly;
pub use quadform::{QuadForm, WittData};
pub use verdict::{Answer, Certificate, Verdict};
