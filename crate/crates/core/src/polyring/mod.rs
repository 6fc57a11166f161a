//! Exact polynomial and rational-function arithmetic over ℤ and ℚ.

mod gcd;
mod parse;
mod poly;
mod projective;
mod rational;

pub use gcd::{gcd, gcd_all, lcm};
pub use parse::{parse_poly, parse_rational, split_list};
pub use poly::{Monomial, MultiPoly};
pub use projective::{normalize_projective, ProjectivePoint};
pub use rational::RationalFunction;
