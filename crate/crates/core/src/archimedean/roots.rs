//! Complex roots of univariate polynomials by Aberth–Ehrlich simultaneous
//! iteration.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::polyring::{gcd, MultiPoly};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 200;

/// Roots closer than this (relative) are treated as one cluster and replaced
/// by their centroid.
const CLUSTER_RADIUS: f64 = 1e-6;

/// All complex roots of `coeffs` (ascending powers), with multiplicity.
///
/// Leading zeros are trimmed; a constant has no roots. Fails explicitly if
/// the iteration does not settle within [`MAX_ITERATIONS`].
pub fn roots_complex(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let n_eff = match coeffs.iter().rposition(|c| !c.is_zero()) {
        Some(k) => k,
        None => return Ok(Vec::new()),
    };
    let coeffs = &coeffs[..=n_eff];
    let zeros_at_origin = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let p = &coeffs[zeros_at_origin..];
    let mut out = vec![Complex64::zero(); zeros_at_origin];
    out.extend(nonzero_roots(p, tol)?);
    Ok(out)
}

fn nonzero_roots(p: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let n = p.len() - 1;
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-p[0] / p[1]]),
        2 => return Ok(quadratic(p[2], p[1], p[0]).to_vec()),
        _ => {}
    }
    let lead = p[n];
    let monic: Vec<Complex64> = p.iter().map(|c| c / lead).collect();
    let deriv: Vec<Complex64> = (1..=n).map(|k| monic[k] * k as f64).collect();
    let abs_coeffs: Vec<f64> = monic.iter().map(|c| c.norm()).collect();

    // initial points on a perturbed circle of radius |p0/pn|^(1/n)
    let radius = monic[0].norm().powf(1.0 / n as f64).max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius * (1.0 + 0.01 * k as f64 / n as f64), angle)
        })
        .collect();
    let mut done = vec![false; n];

    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let zk = z[k];
            let (val, der, scale) = eval_with_derivative(&monic, &deriv, &abs_coeffs, zk);
            if val.norm() <= 16.0 * f64::EPSILON * scale {
                done[k] = true;
                continue;
            }
            let ratio = val / der;
            let mut repulsion = Complex64::zero();
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    let diff = zk - zj;
                    if !diff.is_zero() {
                        repulsion += diff.inv();
                    }
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                all_done = false;
                z[k] = zk * Complex64::new(1.0001, 0.0001);
                continue;
            }
            z[k] = zk - step;
            if step.norm() <= tol * (1.0 + z[k].norm()) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return Ok(merge_clusters(z));
        }
    }
    Err(Error::RootsNotConverged { iterations: MAX_ITERATIONS, degree: n })
}

/// p(z), p'(z) and Σ|c_k||z|^k, evaluated in 1/z when |z| > 1 to stay finite.
/// Only the ratio p/p' and the comparison val vs. scale are used, so a common
/// factor may be dropped.
fn eval_with_derivative(
    p: &[Complex64],
    d: &[Complex64],
    abs_c: &[f64],
    z: Complex64,
) -> (Complex64, Complex64, f64) {
    let r = z.norm();
    if r <= 1.0 {
        let val = p.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c);
        let der = d.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c);
        let scale = abs_c.iter().rev().fold(0.0, |acc, &c| acc * r + c);
        (val, der, scale)
    } else {
        // divide p by z^n and p' by z^(n-1), then multiply p' back by 1/z
        let w = z.inv();
        let rw = 1.0 / r;
        let val = p.iter().fold(Complex64::zero(), |acc, &c| acc * w + c);
        let der = d.iter().fold(Complex64::zero(), |acc, &c| acc * w + c) * w;
        let scale = abs_c.iter().fold(0.0, |acc, &c| acc * rw + c);
        (val, der, scale)
    }
}

fn quadratic(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    let q1 = b + disc;
    let q2 = b - disc;
    let q = -0.5 * if q1.norm() >= q2.norm() { q1 } else { q2 };
    if q.is_zero() {
        return [Complex64::zero(), Complex64::zero()];
    }
    [q / a, c / q]
}

fn merge_clusters(mut z: Vec<Complex64>) -> Vec<Complex64> {
    let n = z.len();
    let mut assigned = vec![false; n];
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let radius = CLUSTER_RADIUS * (1.0 + z[i].norm());
        let members: Vec<usize> = (i..n)
            .filter(|&j| !assigned[j] && (z[j] - z[i]).norm() <= radius)
            .collect();
        if members.len() > 1 {
            let centroid = members.iter().map(|&j| z[j]).sum::<Complex64>() / members.len() as f64;
            for &j in &members {
                z[j] = centroid;
                assigned[j] = true;
            }
        }
    }
    z
}

/// Complex roots of an integer univariate polynomial (`nvars == 1`, or a
/// constant), with multiplicity.
///
/// Repeated factors are split off exactly first: with `c_1 = f` and
/// `c_{k+1} = gcd(c_k, c_k')`, each `c_k / c_{k+1}` is squarefree and carries
/// the roots of multiplicity `≥ k`, so every numerical solve sees simple roots.
pub fn roots(f: &MultiPoly, tol: f64) -> Result<Vec<Complex64>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.nvars() == 0 || f.is_constant() {
        return Ok(Vec::new());
    }
    if f.nvars() != 1 {
        return Err(Error::InvalidArgument(format!(
            "root finding needs a univariate polynomial, got {} variables",
            f.nvars()
        )));
    }
    let mut out = Vec::new();
    let mut cur = f.clone();
    while cur.degree_in(0).unwrap_or(0) > 0 {
        let d = derivative(&cur);
        let next = gcd(&cur, &d);
        let distinct = cur.try_div_exact(&next).expect("gcd divides");
        out.extend(roots_complex(&to_complex(&distinct), tol)?);
        cur = next;
    }
    Ok(out)
}

pub(crate) fn derivative(f: &MultiPoly) -> MultiPoly {
    MultiPoly::from_terms(
        1,
        f.terms().filter(|(m, _)| m.exponents()[0] > 0).map(|(m, c)| {
            let e = m.exponents()[0];
            (vec![e - 1], c * e)
        }),
    )
}

/// Dense complex coefficients of a univariate integer polynomial, scaled by a
/// common power of two (roots are unaffected).
fn to_complex(f: &MultiPoly) -> Vec<Complex64> {
    let deg = f.degree_in(0).unwrap_or(0) as usize;
    let max_bits = f.coefficients().map(|c| c.bits()).max().unwrap_or(0);
    let shift = max_bits.saturating_sub(60);
    let mut out = vec![Complex64::zero(); deg + 1];
    for (m, c) in f.terms() {
        let v = if shift > 0 {
            let pre = c.bits().saturating_sub(64);
            let top: f64 = num_traits::ToPrimitive::to_f64(&(c >> pre)).expect("fits");
            top * 2f64.powi(pre as i32 - shift as i32)
        } else {
            num_traits::ToPrimitive::to_f64(c).expect("fits")
        };
        out[m.exponents()[0] as usize] = Complex64::new(v, 0.0);
    }
    out
}
