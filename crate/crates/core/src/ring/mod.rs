//! Exact scalars: Laurent polynomials over Q, their fraction field, and dense
//! linear algebra over it.

pub mod degree;
pub mod fm;
pub mod gcd;
pub mod matrix;
pub mod poly;
pub mod qserde;
pub mod ratfunc;
pub mod series;
pub mod text;
pub mod vars;

pub use degree::{a_degree, newton_polytope, NewtonPolytope};
pub use matrix::{solve_linear, Matrix, Solution};
pub use poly::{q, qr, LaurentPoly, Monomial, Q};
pub use ratfunc::RationalFunction;
pub use series::limit_at_infinity;
pub use text::{parse_poly, parse_ratfunc};
pub use vars::{idx, Var, VarClass, VarTable};
