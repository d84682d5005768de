pub mod degree;
pub mod error;
pub mod parser;
pub mod poly;

pub use degree::Degree;
pub use error::{Error, Result};
pub use poly::{Monomial, Polynomial, Rational};
pub mod autos;
pub mod decision;
pub mod linsolve;
pub mod numsemi;
pub mod poisson;
pub mod reduction;
pub mod report;
