//! Closed-form arithmetic intersection numbers on `B = (ℙ¹_ℤ)^d` for line
//! bundles `L̄ = p_1^* L̄_1 ⊗ ⋯ ⊗ p_d^* L̄_d` whose factors are either the
//! Fubini–Study `O(1)` or a scaled trivial bundle `(O, c‖·‖_can)`.
//!
//! `Δ∞^{(i)}` is the pullback of the section at infinity along the `i`-th
//! projection; it is isomorphic to `(ℙ¹_ℤ)^{d-1}`, which is what makes the
//! degrees below computable in closed form.

use serde::{Deserialize, Serialize};

use crate::archimedean::mc::integrate;
use crate::archimedean::{sample_fs, MCEstimate, MCParams};
use crate::error::{Error, Result};

/// `σ = deg^(ĉ₁(O(1), ‖·‖_FS)²)` on `ℙ¹_ℤ`.
pub const SIGMA: f64 = 0.5;

/// One factor of a product polarization on `(ℙ¹_ℤ)^d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum FactorBundle {
    /// `(O(1), ‖·‖_FS)`.
    FubiniStudy,
    /// `(O, c‖·‖_can)` with `c > 0`.
    ScaledTrivial(f64),
}

impl FactorBundle {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FactorBundle::ScaledTrivial(c) if !(c > 0.0 && c.is_finite()) => {
                Err(Error::InvalidArgument(format!("scale must be positive and finite, got {c}")))
            }
            _ => Ok(()),
        }
    }

    /// Geometric degree on the generic fiber.
    pub fn degree(&self) -> f64 {
        match self {
            FactorBundle::FubiniStudy => 1.0,
            FactorBundle::ScaledTrivial(_) => 0.0,
        }
    }

    /// `deg^(ĉ₁(L̄)²)` on `ℙ¹_ℤ`. The trivial bundle has `ĉ₁ = (0, -2 log c)`,
    /// whose square vanishes.
    pub fn self_intersection(&self) -> f64 {
        match self {
            FactorBundle::FubiniStudy => SIGMA,
            FactorBundle::ScaledTrivial(_) => 0.0,
        }
    }
}

/// `deg^(L̄|_{Δ∞})`: 0 for Fubini–Study (`‖X₀‖_FS = 1` at `(1:0)`), `-log c`
/// for the scaled trivial bundle.
pub fn delta_infty_restriction(b: FactorBundle) -> f64 {
    match b {
        FactorBundle::FubiniStudy => 0.0,
        FactorBundle::ScaledTrivial(c) => -c.ln(),
    }
}

/// Product polarization data: one bundle per `ℙ¹` factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarizationSpec {
    factors: Vec<FactorBundle>,
}

impl PolarizationSpec {
    pub fn new(factors: Vec<FactorBundle>) -> Result<Self> {
        for f in &factors {
            f.validate()?;
        }
        Ok(PolarizationSpec { factors })
    }

    /// `p_1^* O(1)_FS ⊗ ⋯ ⊗ p_d^* O(1)_FS`.
    pub fn all_fubini_study(d: usize) -> Self {
        PolarizationSpec { factors: vec![FactorBundle::FubiniStudy; d] }
    }

    /// All Fubini–Study except a scaled trivial bundle at 1-based slot `i`.
    pub fn auxiliary(d: usize, i: usize, c: f64) -> Result<Self> {
        if i == 0 || i > d {
            return Err(Error::FactorOutOfRange { index: i, d });
        }
        let mut factors = vec![FactorBundle::FubiniStudy; d];
        factors[i - 1] = FactorBundle::ScaledTrivial(c);
        Self::new(factors)
    }

    pub fn d(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[FactorBundle] {
        &self.factors
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `deg^(ĉ₁(L̄|_{Δ∞^{(i)}})^d)` for 1-based `i`:
///
/// `d! (Π_{k≠i} deg L_k) deg^(L̄_i|_{Δ∞}) + (d!/2) Σ_{j≠i} (Π_{k≠i,j} deg L_k) deg^(ĉ₁(L̄_j)²)`.
pub fn delta_infty_power(spec: &PolarizationSpec, i: usize) -> Result<f64> {
    let d = spec.d();
    if i == 0 || i > d {
        return Err(Error::FactorOutOfRange { index: i, d });
    }
    let f = spec.factors();
    let slot = i - 1;
    let fact = factorial(d);
    let others_deg: f64 = (0..d).filter(|&k| k != slot).map(|k| f[k].degree()).product();
    let mut total = fact * others_deg * delta_infty_restriction(f[slot]);
    for j in (0..d).filter(|&j| j != slot) {
        let deg: f64 = (0..d).filter(|&k| k != slot && k != j).map(|k| f[k].degree()).product();
        total += fact / 2.0 * deg * f[j].self_intersection();
    }
    Ok(total)
}

/// `e_d = deg^(ĉ₁(H̄|_{Δ∞^{(i)}})^d) = d!(d-1)/4` for the all-Fubini–Study
/// polarization (independent of `i`).
pub fn arithmetic_e(d: usize) -> f64 {
    if d == 0 {
        return 0.0;
    }
    factorial(d) * (d as f64 - 1.0) * SIGMA / 2.0
}

/// `e = d!(-log c + (d-1)σ/2)`: the degree on `Δ∞^{(i)}` of the auxiliary
/// bundle with the scaled trivial factor in slot `i`.
pub fn auxiliary_e(c: f64, d: usize) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("scale must be positive and finite, got {c}")));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    Ok(factorial(d) * (-c.ln() + (d as f64 - 1.0) * SIGMA / 2.0))
}

/// `σ` together with its optional numerical check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfIntersection {
    pub value: f64,
    /// Monte Carlo value of `∫ ½ log(1 + |z|²) ω`, when requested.
    pub check: Option<MCEstimate>,
}

/// Returns `σ = 1/2`. With `verify`, recomputes `σ = ∫ -log‖X₀‖_FS c₁(FS)`
/// by Monte Carlo (the `log|z|` part integrates to zero) and fails unless it
/// agrees within 4 standard errors.
pub fn fs_self_intersection(verify: Option<&MCParams>) -> Result<SelfIntersection> {
    let Some(params) = verify else {
        return Ok(SelfIntersection { value: SIGMA, check: None });
    };
    let est = integrate(params, 0.0, |rng| Some(0.5 * sample_fs(rng).norm_sqr().ln_1p()))?;
    if (est.mean - SIGMA).abs() > 4.0 * est.stderr {
        return Err(Error::VerificationFailed(format!(
            "sigma estimate {} differs from 1/2 by more than 4 stderr ({})",
            est.mean, est.stderr
        )));
    }
    Ok(SelfIntersection { value: SIGMA, check: Some(est) })
}
