//! Truncated polynomial algebra in u and q- or t-variables, and the
//! differential operators acting on it.

mod builders;
mod operator;
mod poly;
mod subst;
mod xi;

pub use builders::*;
pub use operator::{DiffOperator, OpKey};
pub use poly::{all_monomials, Alphabet, GradedPoly, Monomial, TruncationSpec};
pub use subst::{odd_substitution, operator_t_to_q, phi_coefficients, phi_polynomials, phi_substitution, SubstitutionMap};
pub use xi::{lowering_generator, quadratic_generator, xi_map};
