//! Naive heights of points of `ℙⁿ(ℚ(z1, …, zd))`.
//!
//! For a normalized point (coprime integer polynomials, positive leading
//! coefficient on the first nonzero coordinate) the sum over prime divisors of
//! the model only sees the `d` divisors at infinity `Δ∞^{(i)}`, so
//!
//! `h(P) = Σ_i (max_j deg_i f_j) · deg^(ĉ₁(H̄|_{Δ∞^{(i)}})^d) + ∫ log max_j |f_j| c₁(H̄)^d`.
//!
//! The curvature form of the all-Fubini–Study polarization is `c₁(H̄)^d =
//! d! ω₁ ∧ ⋯ ∧ ω_d`, so the integral is `d!` times the probability-measure
//! average computed by [`logmax_integral`].

use serde::{Deserialize, Serialize};

use crate::arakelov::{arithmetic_e, auxiliary_e, factorial};
use crate::archimedean::{
    logmax_integral, logmax_integral_coords, pole_clearance, proximity, roots, v_measure, MCEstimate, MCParams,
    DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::polyring::{gcd_all, lcm, MultiPoly, ProjectivePoint, RationalFunction};

/// A height split into its exact divisorial part and its archimedean integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightEstimate {
    pub exact_part: f64,
    pub arch_part: MCEstimate,
    pub total: f64,
    pub stderr: f64,
}

impl HeightEstimate {
    pub fn exact(value: f64, seed: u64) -> Self {
        HeightEstimate { exact_part: value, arch_part: MCEstimate::exact(0.0, seed), total: value, stderr: 0.0 }
    }

    fn from_parts(exact_part: f64, arch_part: MCEstimate) -> Self {
        HeightEstimate { exact_part, arch_part, total: exact_part + arch_part.mean, stderr: arch_part.stderr }
    }
}

/// Which polarization of `ℚ(z1, …, zd)` the height is taken with.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PolarizationChoice {
    /// Fubini–Study `O(1)` on every factor of `(ℙ¹_ℤ)^d`.
    Arithmetic,
    /// Fubini–Study everywhere except `(O, c‖·‖_can)` at 1-based `slot`.
    AuxiliaryA { slot: usize, c: f64 },
    /// `d = 1` with the scaled trivial bundle `(O, e⁻¹‖·‖_can)`: the
    /// function-field height `max_j deg f_j`.
    Geometric,
    /// `d = 0`: the usual height on `ℙⁿ(ℚ)`.
    NumberField,
}

/// `log max_i |a_i|` for a point with constant coordinates.
pub fn height_number_field(point: &ProjectivePoint) -> Result<HeightEstimate> {
    if !point.is_constant() {
        return Err(Error::IncompatiblePolarization(
            "the number-field height needs integer coordinates".into(),
        ));
    }
    let est = logmax_integral(point, &MCParams::new(1, 0))?;
    Ok(HeightEstimate::exact(est.mean, 0))
}

fn degree_part(point: &ProjectivePoint, per_var: f64) -> f64 {
    (0..point.nvars()).map(|v| point.max_degree_in(v) as f64 * per_var).sum()
}

/// The naive height of a normalized point.
pub fn naive_height(point: &ProjectivePoint, pol: PolarizationChoice, params: &MCParams) -> Result<HeightEstimate> {
    let d = point.nvars();
    match pol {
        PolarizationChoice::NumberField => {
            let mut h = height_number_field(point)?;
            h.arch_part.seed = params.seed;
            Ok(h)
        }
        PolarizationChoice::Arithmetic => {
            params.validate()?;
            let exact = degree_part(point, arithmetic_e(d));
            let arch = logmax_integral(point, params)?.scaled(factorial(d));
            Ok(HeightEstimate::from_parts(exact, arch))
        }
        PolarizationChoice::AuxiliaryA { slot, c } => {
            if slot == 0 || slot > d {
                return Err(Error::FactorOutOfRange { index: slot, d });
            }
            let e = auxiliary_e(c, d)?;
            Ok(HeightEstimate::exact(point.max_degree_in(slot - 1) as f64 * e, params.seed))
        }
        PolarizationChoice::Geometric => {
            if d != 1 {
                return Err(Error::IncompatiblePolarization(format!(
                    "the geometric polarization needs exactly one variable, got {d}"
                )));
            }
            Ok(HeightEstimate::exact(point.max_degree_in(0) as f64, params.seed))
        }
    }
}

/// The naive height of an arbitrary (not necessarily normalized) tuple.
///
/// For the arithmetic polarization the tuple is not normalized first: after
/// clearing denominators, the common factor `g` of the polynomial tuple
/// contributes `-Σ_i deg_i(g) e_d - d! log v(g)` through the divisors it cuts
/// out, and the integral is taken over the unreduced coordinates. The result
/// agrees with [`naive_height`] of the normalized point up to Monte Carlo
/// error. When `d ≥ 2` and `g` is not constant, `log v(g)` is itself
/// estimated and its error is included in `stderr`.
///
/// The other polarizations are exact and go through normalization.
pub fn naive_height_tuple(
    coords: &[RationalFunction],
    pol: PolarizationChoice,
    params: &MCParams,
) -> Result<HeightEstimate> {
    if coords.iter().all(|c| c.is_zero()) {
        return Err(Error::ZeroPoint);
    }
    let d = coords[0].nvars();
    if let Some(other) = coords.iter().find(|c| c.nvars() != d) {
        return Err(Error::NvarsMismatch { left: d, right: other.nvars() });
    }
    let common = coords.iter().fold(MultiPoly::one(d), |acc, c| lcm(&acc, c.den()));
    let polys: Vec<MultiPoly> = coords
        .iter()
        .map(|c| c.num() * &common.try_div_exact(c.den()).expect("lcm is a multiple"))
        .collect();
    if pol != PolarizationChoice::Arithmetic {
        return naive_height(&ProjectivePoint::from_polys(polys)?, pol, params);
    }
    params.validate()?;
    let g = gcd_all(d, polys.iter());
    let e_d = arithmetic_e(d);
    let fact = factorial(d);
    let mut exact = 0.0;
    for v in 0..d {
        let top = polys.iter().filter_map(|p| p.degree_in(v)).max().unwrap_or(0);
        exact += (top - g.degree_in(v).unwrap_or(0)) as f64 * e_d;
    }
    let log_v = v_measure(&g, params)?.log_v.scaled(fact);
    exact -= log_v.mean;
    let arch = logmax_integral_coords(&polys, params)?.scaled(fact);
    let stderr = arch.stderr.hypot(log_v.stderr);
    Ok(HeightEstimate { exact_part: exact, arch_part: arch, total: exact + arch.mean, stderr })
}

/// The Nevanlinna characteristic `T_f(r) = N(r) + m(r)` and its parts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NevanlinnaValue {
    pub value: f64,
    /// `Σ_{|x| < r} (pole order at x) · log(r/|x|)`.
    pub counting: f64,
    /// Mean of `log⁺|f|` on the circle `|z| = r`.
    pub proximity: MCEstimate,
}

/// `T_f(r)` for a rational function of one variable with no pole at 0.
pub fn nevanlinna_t(f: &RationalFunction, r: f64, params: &MCParams) -> Result<NevanlinnaValue> {
    let den = f.den();
    let den_at_zero = den.terms().next().filter(|(m, _)| m.total_degree() == 0);
    if !f.is_zero() && den_at_zero.is_none() {
        return Err(Error::PoleAtOrigin);
    }
    let prox = proximity(f, r, params)?;
    let counting = if f.is_constant() {
        0.0
    } else {
        roots(den, DEFAULT_TOL)?
            .iter()
            .map(|x| x.norm())
            .filter(|&a| a < r - pole_clearance(r))
            .fold(0.0, |acc, a| acc + (r / a).ln())
    };
    Ok(NevanlinnaValue { value: counting + prox.mean, counting, proximity: prox })
}
