//! Enumeration of the points of `ℙⁿ(ℚ(z1, …, zd))` of bounded arithmetic
//! height under per-variable degree caps.
//!
//! Every coordinate `f_j` of a normalized point satisfies
//! `log v(f_j) ≤ ∫ log max_i |f_i| ≤ h(P)`, and `|f| ≤ 2^{Σ deg_i f} v(f)`.
//! So a height bound `M` caps every coefficient at `2^{Σ caps} e^M`, which
//! makes the search finite.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Float, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::archimedean::MCParams;
use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::heights::{naive_height, HeightEstimate, PolarizationChoice};
use crate::polyring::{Monomial, MultiPoly, ProjectivePoint};

pub const DEFAULT_BAND: f64 = 3.0;
pub const DEFAULT_BUDGET: u64 = 2_000_000;
const CHUNK: u64 = 64;

/// What to enumerate.
#[derive(Clone, Debug, PartialEq)]
pub struct EnumSpec {
    pub m: f64,
    /// Projective dimension.
    pub n: usize,
    pub d: usize,
    pub deg_caps: Vec<u32>,
    pub params: MCParams,
    /// Multiplier of the stderr defining the borderline band around `M`.
    pub classify_band: f64,
    /// Largest number of coordinate tuples to visit.
    pub budget: u64,
    /// Overrides [`coeff_bound`], e.g. to check that a larger bound finds
    /// nothing new.
    pub coeff_bound: Option<BigInt>,
    pub pol: PolarizationChoice,
}

impl EnumSpec {
    pub fn new(m: f64, n: usize, deg_caps: Vec<u32>, params: MCParams) -> Self {
        EnumSpec {
            m,
            n,
            d: deg_caps.len(),
            deg_caps,
            params,
            classify_band: DEFAULT_BAND,
            budget: DEFAULT_BUDGET,
            coeff_bound: None,
            pol: PolarizationChoice::Arithmetic,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.m.is_finite() || self.m < 0.0 {
            return Err(Error::InvalidArgument(format!("height bound must be finite and nonnegative, got {}", self.m)));
        }
        if self.deg_caps.len() != self.d {
            return Err(Error::InvalidArgument(format!(
                "expected {} degree caps, got {}",
                self.d,
                self.deg_caps.len()
            )));
        }
        if !(self.classify_band >= 0.0) {
            return Err(Error::InvalidArgument("classification band must be nonnegative".into()));
        }
        match self.pol {
            PolarizationChoice::Arithmetic => {}
            PolarizationChoice::NumberField if self.d == 0 => {}
            PolarizationChoice::Geometric => return Err(Error::GeometricNotNorthcott),
            other => {
                return Err(Error::IncompatiblePolarization(format!(
                    "enumeration needs the arithmetic polarization, got {other:?}"
                )))
            }
        }
        self.params.validate()
    }
}

/// `⌊2^{Σ caps} e^M⌋`, computed with a relative slack of `1e-12` so that
/// rounding in `e^M` never loses a lattice point.
pub fn coeff_bound(m: f64, deg_caps: &[u32]) -> Result<BigInt> {
    if !m.is_finite() || m < 0.0 {
        return Err(Error::InvalidArgument(format!("height bound must be finite and nonnegative, got {m}")));
    }
    let shift: i64 = deg_caps.iter().map(|&c| c as i64).sum();
    // e^M = 2^t with t = M / ln 2 = k + frac
    let t = m / std::f64::consts::LN_2;
    let k = t.floor();
    let x = (t - k).exp2() * (1.0 + 1e-12);
    let (mantissa, exp, _) = Float::integer_decode(x);
    let e = exp as i64 + k as i64 + shift;
    let mant = BigInt::from(mantissa);
    Ok(if e >= 0 { mant << e as u64 } else { mant >> (-e) as u64 })
}

/// Points with height at most `M` (within the band) are either clearly
/// inside or within `classify_band` standard errors of the cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Certain,
    Borderline,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundedPoint {
    pub point: ProjectivePoint,
    pub height: HeightEstimate,
    pub class: Class,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Enumeration {
    pub coeff_bound: BigInt,
    /// Number of coordinate tuples visited.
    pub searched: u64,
    pub points: Vec<BoundedPoint>,
}

fn cardinality(bound: &BigInt, monomials: usize, coords: usize) -> BigInt {
    let side: BigInt = bound * 2 + 1;
    num_traits::pow(side, monomials * coords)
}

fn monomials(caps: &[u32]) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    for &c in caps {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                (0..=c).map(move |k| {
                    let mut e = e.clone();
                    e.push(k);
                    e
                })
            })
            .collect();
    }
    out.into_iter().map(Monomial::new).collect()
}

/// All normalized points of height `≤ M + band · stderr` within the caps,
/// sorted by height and then by coordinates in graded-lex order.
pub fn enumerate_bounded(spec: &EnumSpec) -> Result<Enumeration> {
    spec.validate()?;
    let bound = match &spec.coeff_bound {
        Some(b) => b.clone(),
        None => coeff_bound(spec.m, &spec.deg_caps)?,
    };
    let monos = monomials(&spec.deg_caps);
    let coords = spec.n + 1;
    let card = cardinality(&bound, monos.len(), coords);
    let total = match card.to_u64() {
        Some(t) if t <= spec.budget => t,
        _ => return Err(Error::BudgetExceeded { cardinality: card.to_string(), budget: spec.budget }),
    };
    let side = bound.to_u64().expect("below budget") * 2 + 1;
    let b = side as i64 / 2;
    let width = monos.len() * coords;
    let chunks = total.div_ceil(CHUNK);
    let found = map_indexed(chunks as usize, spec.params.exec, |chunk| {
        let mut out = Vec::new();
        let mut digits = vec![0i64; width];
        let start = chunk as u64 * CHUNK;
        for idx in start..(start + CHUNK).min(total) {
            let mut r = idx;
            for dgt in digits.iter_mut() {
                *dgt = (r % side) as i64 - b;
                r /= side;
            }
            let polys: Vec<MultiPoly> = digits
                .chunks(monos.len())
                .map(|cs| {
                    MultiPoly::from_terms(
                        spec.d,
                        monos.iter().zip(cs).map(|(m, &c)| (m.exponents().to_vec(), BigInt::from(c))),
                    )
                })
                .collect();
            if !ProjectivePoint::is_canonical(&polys) {
                continue;
            }
            let point = ProjectivePoint::from_polys(polys).expect("canonical");
            let h = naive_height(&point, spec.pol, &spec.params)?;
            if h.total <= spec.m + spec.classify_band * h.stderr {
                let class = if h.stderr > 0.0 && (h.total - spec.m).abs() <= spec.classify_band * h.stderr {
                    Class::Borderline
                } else {
                    Class::Certain
                };
                out.push(BoundedPoint { point, height: h, class });
            }
        }
        Ok(out)
    });
    let mut points = Vec::new();
    for part in found {
        points.extend(part?);
    }
    points.sort_by(|a, b| {
        a.height.total.total_cmp(&b.height.total).then_with(|| cmp_coords(a.point.coords(), b.point.coords()))
    });
    points.dedup_by(|a, b| a.point == b.point);
    Ok(Enumeration { coeff_bound: bound, searched: total, points })
}

/// Graded-lex comparison of coordinate tuples, leading terms first.
pub fn cmp_coords(a: &[MultiPoly], b: &[MultiPoly]) -> Ordering {
    for (p, q) in a.iter().zip(b) {
        let ord = cmp_poly(p, q);
        if ord != Ordering::Equal {
            return ord;
        }
    }
    a.len().cmp(&b.len())
}

fn cmp_poly(p: &MultiPoly, q: &MultiPoly) -> Ordering {
    let mut pt = p.terms().rev();
    let mut qt = q.terms().rev();
    loop {
        match (pt.next(), qt.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((m1, c1)), Some((m2, c2))) => {
                let ord = m1.cmp(m2).then_with(|| c1.cmp(c2));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
        }
    }
}

impl Enumeration {
    /// Number of points in each class.
    pub fn counts(&self) -> (usize, usize) {
        let borderline = self.points.iter().filter(|p| p.class == Class::Borderline).count();
        (self.points.len() - borderline, borderline)
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
