//! Overflow-safe floating-point evaluation of integer polynomials at complex
//! points.
//!
//! Coefficients are scaled by a common power of two, and every variable with
//! `|z_j| > 1` is inverted (`w_j = 1/z_j`, exponent `D_j - e_j`) so that all
//! monomials stay bounded; the discarded factors come back as logarithms.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::polyring::MultiPoly;

/// Natural log of `|n|`; `-inf` for zero. Exact to f64 rounding for any size.
pub fn ln_abs_bigint(n: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        n.abs().to_f64().expect("finite").ln()
    } else {
        let shift = bits - 64;
        let top = (n.abs() >> shift).to_f64().expect("finite");
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// `n · 2^(-shift)` as f64.
fn scaled_f64(n: &BigInt, shift: i64) -> f64 {
    let bits = n.bits() as i64;
    let pre = (bits - 64).max(0);
    let m = (n >> pre as u64).to_f64().expect("fits");
    let e = pre - shift;
    m * 2f64.powi(e.clamp(-1100, 1100) as i32)
}

/// A polynomial prepared for repeated evaluation of `log |f(z)|`.
#[derive(Clone, Debug)]
pub struct LogEvaluator {
    nvars: usize,
    degs: Vec<u32>,
    /// Dense coefficients when univariate, index = exponent.
    dense: Option<Vec<f64>>,
    terms: Vec<(Vec<u32>, f64)>,
    log_scale: f64,
    zero: bool,
}

impl LogEvaluator {
    pub fn new(f: &MultiPoly) -> Self {
        let nvars = f.nvars();
        let zero = f.is_zero();
        let max_bits = f.coefficients().map(|c| c.bits()).max().unwrap_or(0) as i64;
        let shift = (max_bits - 60).max(0);
        let degs: Vec<u32> = (0..nvars).map(|v| f.degree_in(v).unwrap_or(0)).collect();
        let terms: Vec<(Vec<u32>, f64)> = f
            .terms()
            .map(|(m, c)| (m.exponents().to_vec(), scaled_f64(c, shift)))
            .collect();
        let dense = (nvars == 1).then(|| {
            let mut d = vec![0.0; degs[0] as usize + 1];
            for (e, c) in &terms {
                d[e[0] as usize] = *c;
            }
            d
        });
        LogEvaluator {
            nvars,
            degs,
            dense,
            terms,
            log_scale: shift as f64 * std::f64::consts::LN_2,
            zero,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// `log |f(z)|`, or `-inf` where `f` vanishes (or underflows).
    pub fn log_abs(&self, z: &[Complex64]) -> f64 {
        debug_assert_eq!(z.len(), self.nvars);
        if self.zero {
            return f64::NEG_INFINITY;
        }
        let mut log_factor = self.log_scale;
        if let Some(dense) = &self.dense {
            let z0 = z[0];
            let r = z0.norm();
            let val = if r > 1.0 {
                // z^D · Σ c_k w^(D-k), Horner in w = 1/z from the constant term up
                let w = z0.inv();
                log_factor += self.degs[0] as f64 * r.ln();
                dense.iter().fold(Complex64::zero(), |acc, &c| acc * w + c)
            } else {
                dense.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z0 + c)
            };
            return log_factor + val.norm().ln();
        }
        let mut w = [Complex64::zero(); 16];
        let mut inv = [false; 16];
        let mut w_vec;
        let (w, inv): (&mut [Complex64], &mut [bool]) = if self.nvars <= 16 {
            (&mut w[..self.nvars], &mut inv[..self.nvars])
        } else {
            w_vec = (vec![Complex64::zero(); self.nvars], vec![false; self.nvars]);
            (&mut w_vec.0[..], &mut w_vec.1[..])
        };
        for j in 0..self.nvars {
            let r = z[j].norm();
            if r > 1.0 {
                inv[j] = true;
                w[j] = z[j].inv();
                log_factor += self.degs[j] as f64 * r.ln();
            } else {
                w[j] = z[j];
            }
        }
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            let mut t = Complex64::new(*c, 0.0);
            for j in 0..self.nvars {
                let k = if inv[j] { self.degs[j] - e[j] } else { e[j] };
                if k > 0 {
                    t *= w[j].powu(k);
                }
            }
            acc += t;
        }
        log_factor + acc.norm().ln()
    }
}

/// Specializes all variables except `main` and returns the complex
/// coefficients of the resulting univariate polynomial in `z_main`, up to a
/// common factor whose logarithm is returned alongside.
#[derive(Clone, Debug)]
pub struct Specializer {
    main: usize,
    nvars: usize,
    degs: Vec<u32>,
    main_deg: usize,
    terms: Vec<(Vec<u32>, f64)>,
    log_scale: f64,
}

impl Specializer {
    pub fn new(f: &MultiPoly, main: usize) -> Self {
        let nvars = f.nvars();
        let max_bits = f.coefficients().map(|c| c.bits()).max().unwrap_or(0) as i64;
        let shift = (max_bits - 60).max(0);
        let degs: Vec<u32> = (0..nvars).map(|v| f.degree_in(v).unwrap_or(0)).collect();
        let terms = f
            .terms()
            .map(|(m, c)| (m.exponents().to_vec(), scaled_f64(c, shift)))
            .collect();
        Specializer {
            main,
            nvars,
            main_deg: degs[main] as usize,
            degs,
            terms,
            log_scale: shift as f64 * std::f64::consts::LN_2,
        }
    }

    /// Fills `out` (ascending powers of `z_main`) and returns the log of the
    /// factor that was divided out. `z[main]` is ignored.
    pub fn specialize(&self, z: &[Complex64], out: &mut Vec<Complex64>) -> f64 {
        out.clear();
        out.resize(self.main_deg + 1, Complex64::zero());
        let mut log_factor = self.log_scale;
        let mut w = vec![Complex64::zero(); self.nvars];
        let mut inv = vec![false; self.nvars];
        for j in 0..self.nvars {
            if j == self.main {
                continue;
            }
            let r = z[j].norm();
            if r > 1.0 {
                inv[j] = true;
                w[j] = z[j].inv();
                log_factor += self.degs[j] as f64 * r.ln();
            } else {
                w[j] = z[j];
            }
        }
        for (e, c) in &self.terms {
            let mut t = Complex64::new(*c, 0.0);
            for j in 0..self.nvars {
                if j == self.main {
                    continue;
                }
                let k = if inv[j] { self.degs[j] - e[j] } else { e[j] };
                if k > 0 {
                    t *= w[j].powu(k);
                }
            }
            out[e[self.main] as usize] += t;
        }
        log_factor
    }
}
