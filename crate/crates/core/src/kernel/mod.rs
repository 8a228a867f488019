//! Exact polynomial and module arithmetic: coefficient domains, term orders,
//! Gröbner bases of submodules, syzygies and Smith normal forms.

pub mod basis;
pub mod domain;
pub(crate) mod groebner;
pub mod matrix;
pub mod monomial;
pub mod poly;
pub mod smith;

pub use basis::{groebner_basis, groebner_basis_with_cap, syzygy_matrix, LiftingBasis, ModuleBasis, DEFAULT_DEGREE_CAP};
pub use domain::{Coeff, CoefficientDomain};
pub use matrix::Matrix;
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{Poly, PolyRing};
pub use smith::{smith_normal_form, SmithForm};
