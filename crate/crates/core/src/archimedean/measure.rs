use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eval::{ln_abs_bigint, LogEvaluator, Specializer};
use super::mc::{integrate, MCEstimate, MCParams};
use super::roots::{roots, roots_complex, DEFAULT_TOL};
use super::sampling::sample_fs;
use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::polyring::{MultiPoly, ProjectivePoint, RationalFunction};

/// Largest tolerated fraction of degenerate (identically vanishing) draws.
pub const MAX_DEGENERATE_RATE: f64 = 1e-3;

/// `log |c| + Σ log √(1 + |α|²)` over the roots `α` of the complex polynomial
/// with ascending coefficients `coeffs` and leading coefficient `c`.
///
/// This is `∫ log |p| ω` against the Fubini–Study measure (Jensen's formula
/// applied factor by factor, `v(z - α) = √(1 + |α|²)`). `None` if `p = 0`.
pub fn jensen_log_complex(coeffs: &[Complex64]) -> Result<Option<f64>> {
    let Some(deg) = coeffs.iter().rposition(|c| c.re != 0.0 || c.im != 0.0) else {
        return Ok(None);
    };
    let lead = coeffs[deg].norm();
    let rts = roots_complex(&coeffs[..=deg], DEFAULT_TOL)?;
    Ok(Some(lead.ln() + rts.iter().map(|a| 0.5 * a.norm_sqr().ln_1p()).sum::<f64>()))
}

/// `log v(f)` for a univariate integer polynomial, via its roots.
pub fn jensen_log_v1(f: &MultiPoly) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lead = f.leading_coeff().expect("nonzero");
    let rts = roots(f, DEFAULT_TOL)?;
    Ok(ln_abs_bigint(lead) + rts.iter().map(|a| 0.5 * a.norm_sqr().ln_1p()).sum::<f64>())
}

/// `v(f) = |c| Π √(1 + |α_i|²)` for univariate `f = c Π (z - α_i)`.
pub fn jensen_v1(f: &MultiPoly) -> Result<f64> {
    if let Some(c) = f.constant_value() {
        if !f.is_zero() {
            return Ok(abs_f64(&c));
        }
    }
    jensen_log_v1(f).map(f64::exp)
}

fn abs_f64(c: &num_bigint::BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(&num_traits::Signed::abs(c)).unwrap_or(f64::INFINITY)
}

/// The Mahler-type measure `v(f) = exp ∫ log |f| ω₁ ∧ ⋯ ∧ ω_d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VMeasure {
    pub v: f64,
    /// Estimate of `log v(f)`; its stderr is on the log scale.
    pub log_v: MCEstimate,
}

/// Estimates `v(f)`.
///
/// Constants and univariate polynomials are exact (Jensen). For `d ≥ 2` the
/// variables `z2, …, zd` are sampled from the Fubini–Study measure and the
/// inner integral over `z1` is evaluated exactly by Jensen's formula on the
/// specialized polynomial.
pub fn v_measure(f: &MultiPoly, params: &MCParams) -> Result<VMeasure> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if let Some(c) = f.constant_value() {
        let lv = ln_abs_bigint(&c);
        return Ok(VMeasure { v: abs_f64(&c), log_v: MCEstimate::exact(lv, params.seed) });
    }
    if f.nvars() == 1 {
        let lv = jensen_log_v1(f)?;
        return Ok(VMeasure { v: lv.exp(), log_v: MCEstimate::exact(lv, params.seed) });
    }
    let d = f.nvars();
    let spec = Specializer::new(f, 0);
    let est = integrate(params, MAX_DEGENERATE_RATE, |rng| {
        let mut z = vec![Complex64::new(0.0, 0.0); d];
        for zj in z.iter_mut().skip(1) {
            *zj = sample_fs(rng);
        }
        let mut coeffs = Vec::new();
        let log_factor = spec.specialize(&z, &mut coeffs);
        match jensen_log_complex(&coeffs) {
            Ok(Some(inner)) if inner.is_finite() => Some(log_factor + inner),
            _ => None,
        }
    })?;
    Ok(VMeasure { v: est.mean.exp(), log_v: est })
}

/// Plain Monte Carlo estimate of `∫ log max_j |f_j| ω₁ ∧ ⋯ ∧ ω_d` over
/// `(ℙ¹(ℂ))^d` with the product Fubini–Study probability measure.
///
/// With `d = 0`, or when every coordinate is constant, the integrand is the
/// constant `log max_j |f_j|` and is returned exactly with stderr 0.
pub fn logmax_integral(point: &ProjectivePoint, params: &MCParams) -> Result<MCEstimate> {
    logmax_integral_coords(point.coords(), params)
}

/// [`logmax_integral`] for a coordinate tuple that need not be normalized.
pub fn logmax_integral_coords(coords: &[MultiPoly], params: &MCParams) -> Result<MCEstimate> {
    if coords.iter().all(|c| c.is_zero()) {
        return Err(Error::ZeroPoint);
    }
    let d = coords[0].nvars();
    if let Some(other) = coords.iter().find(|c| c.nvars() != d) {
        return Err(Error::NvarsMismatch { left: d, right: other.nvars() });
    }
    if coords.iter().all(|c| c.is_constant()) {
        let m = coords
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| ln_abs_bigint(&c.constant_value().expect("constant")))
            .fold(f64::NEG_INFINITY, f64::max);
        return Ok(MCEstimate::exact(m, params.seed));
    }
    let evals: Vec<LogEvaluator> = coords.iter().filter(|c| !c.is_zero()).map(LogEvaluator::new).collect();
    integrate(params, MAX_DEGENERATE_RATE, |rng| {
        let mut z = [Complex64::new(0.0, 0.0); 8];
        let mut zv;
        let z: &mut [Complex64] = if d <= 8 {
            &mut z[..d]
        } else {
            zv = vec![Complex64::new(0.0, 0.0); d];
            &mut zv[..]
        };
        for zj in z.iter_mut() {
            *zj = sample_fs(rng);
        }
        let m = evals.iter().map(|e| e.log_abs(z)).fold(f64::NEG_INFINITY, f64::max);
        m.is_finite().then_some(m)
    })
}

/// Mean of `log⁺ |f(r e^{iθ})|` over `θ ∈ [0, 2π)`.
///
/// Midpoint rule on `params.samples` equally spaced angles, accumulated in
/// batches of `params.batch_size`. The reported stderr is the difference to the
/// rule on the even-indexed half of the nodes.
pub fn proximity(f: &RationalFunction, r: f64, params: &MCParams) -> Result<MCEstimate> {
    params.validate()?;
    if f.nvars() != 1 && !f.is_constant() {
        return Err(Error::InvalidArgument("proximity needs a function of one variable".into()));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    if f.is_zero() {
        return Ok(MCEstimate::exact(0.0, params.seed));
    }
    if let Some((a, b)) = f.constant_value() {
        let v = (ln_abs_bigint(&a) - ln_abs_bigint(&b)).max(0.0);
        return Ok(MCEstimate::exact(v, params.seed));
    }
    for pole in roots(f.den(), DEFAULT_TOL)? {
        if (pole.norm() - r).abs() <= pole_clearance(r) {
            return Err(Error::PoleOnCircle { radius: r });
        }
    }
    let num = LogEvaluator::new(f.num());
    let den = LogEvaluator::new(f.den());
    let n = params.samples;
    let nb = params.num_batches();
    let sums = map_indexed(nb as usize, params.exec, |b| {
        let start = b as u64 * params.batch_size;
        let len = params.batch_len(b as u64);
        let (mut all, mut even) = (0.0f64, 0.0f64);
        for k in start..start + len {
            let theta = std::f64::consts::TAU * (k as f64 + 0.5) / n as f64;
            let z = [Complex64::from_polar(r, theta)];
            let v = (num.log_abs(&z) - den.log_abs(&z)).max(0.0);
            all += v;
            if k % 2 == 0 {
                even += v;
            }
        }
        (all, even)
    });
    let (all, even) = sums.iter().fold((0.0, 0.0), |(a, e), (x, y)| (a + x, e + y));
    let mean = all / n as f64;
    let half = n.div_ceil(2);
    let err = if n >= 2 { (mean - even / half as f64).abs() } else { 0.0 };
    Ok(MCEstimate { mean, stderr: err, samples_used: n, seed: params.seed, resamples: 0 })
}

/// Minimum distance between a pole and the circle `|z| = r`.
pub fn pole_clearance(r: f64) -> f64 {
    1e-8 * (1.0 + r)
}
