use std::fmt;

use num_traits::Signed;

use super::gcd::{gcd_all, lcm};
use super::poly::MultiPoly;
use super::rational::RationalFunction;
use crate::error::{Error, Result};

/// A point of ℙⁿ(ℚ(z1, …, zd)) in canonical form: integer polynomial
/// coordinates with no common factor (integer content included), the first
/// nonzero coordinate having a positive graded-lex leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    nvars: usize,
    coords: Vec<MultiPoly>,
}

impl ProjectivePoint {
    /// Normalizes integer polynomial coordinates.
    pub fn from_polys(coords: Vec<MultiPoly>) -> Result<Self> {
        let nvars = check_nvars(coords.iter().map(MultiPoly::nvars))?;
        if coords.iter().all(MultiPoly::is_zero) {
            return Err(Error::ZeroPoint);
        }
        let g = gcd_all(nvars, &coords);
        let mut coords: Vec<MultiPoly> = if g.is_one() {
            coords
        } else {
            coords
                .iter()
                .map(|c| c.try_div_exact(&g).expect("gcd divides every coordinate"))
                .collect()
        };
        let first = coords.iter().find(|c| !c.is_zero()).expect("some coordinate is nonzero");
        if first.leading_coeff().is_some_and(|c| c.is_negative()) {
            coords = coords.into_iter().map(|c| -c).collect();
        }
        Ok(ProjectivePoint { nvars, coords })
    }

    /// True if `coords` is already the canonical representative of its point.
    pub fn is_canonical(coords: &[MultiPoly]) -> bool {
        let Some(first) = coords.iter().find(|c| !c.is_zero()) else {
            return false;
        };
        if first.leading_coeff().is_some_and(|c| c.is_negative()) {
            return false;
        }
        gcd_all(first.nvars(), coords).is_one()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Projective dimension n (number of coordinates minus one).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[MultiPoly] {
        &self.coords
    }

    /// max_j deg_{var}(f_j) over nonzero coordinates (0-based `var`).
    pub fn max_degree_in(&self, var: usize) -> u32 {
        self.coords.iter().filter_map(|c| c.degree_in(var)).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coords.iter().all(MultiPoly::is_constant)
    }
}

/// Clears denominators by their lcm, divides by the full gcd and fixes the
/// sign, producing the canonical representative of `(x0 : … : xn)`.
pub fn normalize_projective(coords: &[RationalFunction]) -> Result<ProjectivePoint> {
    if coords.is_empty() {
        return Err(Error::ZeroPoint);
    }
    let nvars = check_nvars(coords.iter().map(RationalFunction::nvars))?;
    if coords.iter().all(RationalFunction::is_zero) {
        return Err(Error::ZeroPoint);
    }
    let mut l = MultiPoly::one(nvars);
    for c in coords {
        if !c.den().is_one() {
            l = lcm(&l, c.den());
        }
    }
    let polys = coords
        .iter()
        .map(|c| {
            let factor = l.try_div_exact(c.den()).expect("lcm is a multiple of each denominator");
            c.num() * &factor
        })
        .collect();
    ProjectivePoint::from_polys(polys)
}

fn check_nvars(mut it: impl Iterator<Item = usize>) -> Result<usize> {
    let first = it.next().ok_or(Error::ZeroPoint)?;
    for n in it {
        if n != first {
            return Err(Error::NvarsMismatch { left: first, right: n });
        }
    }
    Ok(first)
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " : ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, parse_rational};

    fn rf(s: &str) -> RationalFunction {
        parse_rational(s, 1).unwrap()
    }

    #[test]
    fn divides_content() {
        let p = normalize_projective(&[rf("2*z1"), rf("4")]).unwrap();
        assert_eq!(p.coords(), &[parse_poly("z1", 1).unwrap(), parse_poly("2", 1).unwrap()]);
    }

    #[test]
    fn reduces_rational_coordinates() {
        let p = normalize_projective(&[rf("(z1^2 - 1)/(z1 + 1)"), rf("1")]).unwrap();
        assert_eq!(p.coords(), &[parse_poly("z1 - 1", 1).unwrap(), parse_poly("1", 1).unwrap()]);
    }

    #[test]
    fn clears_denominators() {
        let p = normalize_projective(&[rf("1/z1"), rf("1/(z1 + 1)")]).unwrap();
        assert_eq!(p.coords(), &[parse_poly("z1 + 1", 1).unwrap(), parse_poly("z1", 1).unwrap()]);
    }

    #[test]
    fn sign_fixed_by_first_nonzero() {
        let p = normalize_projective(&[rf("0"), rf("-3*z1"), rf("6")]).unwrap();
        assert_eq!(p.to_string(), "(0 : z1 : -2)");
    }

    #[test]
    fn all_zero_rejected() {
        assert_eq!(normalize_projective(&[rf("0"), rf("0")]), Err(Error::ZeroPoint));
    }

    #[test]
    fn canonical_check() {
        let a = [parse_poly("2", 0).unwrap(), parse_poly("-1", 0).unwrap()];
        assert!(ProjectivePoint::is_canonical(&a));
        let b = [parse_poly("-2", 0).unwrap(), parse_poly("1", 0).unwrap()];
        assert!(!ProjectivePoint::is_canonical(&b));
        let c = [parse_poly("2", 0).unwrap(), parse_poly("4", 0).unwrap()];
        assert!(!ProjectivePoint::is_canonical(&c));
    }
}
