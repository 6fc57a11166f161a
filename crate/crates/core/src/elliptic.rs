//! Weierstrass curves over `ℚ` or `ℚ(t)`, exact group law, and canonical
//! heights through the Tate limit `lim 4^{-n} h_x(2ⁿ P)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::archimedean::MCParams;
use crate::error::{Error, Result};
use crate::heights::{naive_height, HeightEstimate, PolarizationChoice};
use crate::polyring::{normalize_projective, RationalFunction};

type RF = RationalFunction;

/// `y² + a1 xy + a3 y = x³ + a2 x² + a4 x + a6` with nonzero discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurve {
    a1: RF,
    a2: RF,
    a3: RF,
    a4: RF,
    a6: RF,
    disc: RF,
}

/// A point of `E(K)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ECPoint {
    Infinity,
    Affine { x: RF, y: RF },
}

impl ECPoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ECPoint::Infinity)
    }

    pub fn x(&self) -> Option<&RF> {
        match self {
            ECPoint::Infinity => None,
            ECPoint::Affine { x, .. } => Some(x),
        }
    }
}

impl fmt::Display for ECPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ECPoint::Infinity => write!(f, "O"),
            ECPoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl EllipticCurve {
    /// Long Weierstrass form from `[a1, a2, a3, a4, a6]`.
    pub fn new(coeffs: [RF; 5]) -> Result<Self> {
        let nvars = coeffs[0].nvars();
        if let Some(c) = coeffs.iter().find(|c| c.nvars() != nvars) {
            return Err(Error::NvarsMismatch { left: nvars, right: c.nvars() });
        }
        if nvars > 1 {
            return Err(Error::InvalidArgument(format!(
                "curves are supported over Q or Q(t), got {nvars} variables"
            )));
        }
        let [a1, a2, a3, a4, a6] = coeffs;
        let b2 = a1.mul(&a1).add(&a2.scale_int(4));
        let b4 = a4.scale_int(2).add(&a1.mul(&a3));
        let b6 = a3.mul(&a3).add(&a6.scale_int(4));
        let b8 = a1
            .mul(&a1)
            .mul(&a6)
            .add(&a2.mul(&a6).scale_int(4))
            .sub(&a1.mul(&a3).mul(&a4))
            .add(&a2.mul(&a3).mul(&a3))
            .sub(&a4.mul(&a4));
        let disc = b2
            .mul(&b2)
            .mul(&b8)
            .neg()
            .sub(&b4.pow(3).scale_int(8))
            .sub(&b6.mul(&b6).scale_int(27))
            .add(&b2.mul(&b4).mul(&b6).scale_int(9));
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(EllipticCurve { a1, a2, a3, a4, a6, disc })
    }

    /// `y² = x³ + a4 x + a6`.
    pub fn short(a4: RF, a6: RF) -> Result<Self> {
        let z = RF::zero(a4.nvars());
        Self::new([z.clone(), z.clone(), z, a4, a6])
    }

    /// 0 over `ℚ`, 1 over `ℚ(t)`.
    pub fn nvars(&self) -> usize {
        self.a1.nvars()
    }

    pub fn coefficients(&self) -> [&RF; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn discriminant(&self) -> &RF {
        &self.disc
    }

    pub fn contains(&self, p: &ECPoint) -> bool {
        match p {
            ECPoint::Infinity => true,
            ECPoint::Affine { x, y } => {
                if x.nvars() != self.nvars() || y.nvars() != self.nvars() {
                    return false;
                }
                let lhs = y.mul(y).add(&self.a1.mul(x).mul(y)).add(&self.a3.mul(y));
                let rhs = x.pow(3).add(&self.a2.mul(x).mul(x)).add(&self.a4.mul(x)).add(&self.a6);
                lhs == rhs
            }
        }
    }

    /// The affine point `(x, y)`, checked against the equation.
    pub fn point(&self, x: RF, y: RF) -> Result<ECPoint> {
        let p = ECPoint::Affine { x, y };
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(Error::NotOnCurve)
        }
    }

    /// `-(x, y) = (x, -y - a1 x - a3)`.
    pub fn neg(&self, p: &ECPoint) -> ECPoint {
        match p {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine { x, y } => {
                ECPoint::Affine { x: x.clone(), y: y.neg().sub(&self.a1.mul(x)).sub(&self.a3) }
            }
        }
    }

    pub fn add(&self, p: &ECPoint, q: &ECPoint) -> ECPoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (ECPoint::Infinity, _) => return q.clone(),
            (_, ECPoint::Infinity) => return p.clone(),
            (ECPoint::Affine { x: x1, y: y1 }, ECPoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let (lambda, nu) = if x1 == x2 {
            let denom = y1.scale_int(2).add(&self.a1.mul(x1)).add(&self.a3);
            if denom.is_zero() || y1.add(y2).add(&self.a1.mul(x2)).add(&self.a3).is_zero() {
                return ECPoint::Infinity;
            }
            let num_l = x1.mul(x1).scale_int(3).add(&self.a2.mul(x1).scale_int(2)).add(&self.a4).sub(&self.a1.mul(y1));
            let num_n = x1.pow(3).neg().add(&self.a4.mul(x1)).add(&self.a6.scale_int(2)).sub(&self.a3.mul(y1));
            (num_l.div(&denom).expect("nonzero"), num_n.div(&denom).expect("nonzero"))
        } else {
            let dx = x2.sub(x1);
            (
                y2.sub(y1).div(&dx).expect("nonzero"),
                y1.mul(x2).sub(&y2.mul(x1)).div(&dx).expect("nonzero"),
            )
        };
        let x3 = lambda.mul(&lambda).add(&self.a1.mul(&lambda)).sub(&self.a2).sub(x1).sub(x2);
        let y3 = lambda.add(&self.a1).mul(&x3).neg().sub(&nu).sub(&self.a3);
        ECPoint::Affine { x: x3, y: y3 }
    }

    pub fn sub(&self, p: &ECPoint, q: &ECPoint) -> ECPoint {
        self.add(p, &self.neg(q))
    }

    pub fn double(&self, p: &ECPoint) -> ECPoint {
        self.add(p, p)
    }

    /// `m · P` by double-and-add.
    pub fn mul(&self, p: &ECPoint, m: i64) -> ECPoint {
        let base = if m < 0 { self.neg(p) } else { p.clone() };
        let mut k = m.unsigned_abs();
        let mut acc = ECPoint::Infinity;
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &pow);
            }
            k >>= 1;
            if k > 0 {
                pow = self.double(&pow);
            }
        }
        acc
    }

    /// Smallest `m ≥ 1` dividing `multiple` with `m · P = O`, given that
    /// `multiple · P = O`.
    fn exact_order(&self, p: &ECPoint, multiple: u64) -> u64 {
        (1..=multiple)
            .filter(|m| multiple.is_multiple_of(*m))
            .find(|&m| self.mul(p, m as i64).is_infinity())
            .unwrap_or(multiple)
    }
}

/// Naive height of `x(P)` as the point `(x : 1)` of `ℙ¹(K)`.
pub fn x_height(p: &ECPoint, pol: PolarizationChoice, params: &MCParams) -> Result<HeightEstimate> {
    let ECPoint::Affine { x, .. } = p else {
        return Err(Error::PointAtInfinity);
    };
    let point = normalize_projective(&[x.clone(), RF::one(x.nvars())])?;
    naive_height(&point, pol, params)
}

/// One row of the Tate sequence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TateStep {
    pub n: u32,
    /// `h_x(2ⁿ P)`.
    pub h: f64,
    /// `4^{-n} h_x(2ⁿ P)`.
    pub scaled: f64,
    /// `|scaled_n - scaled_{n-1}|`; absent for `n = 0`.
    pub diff: Option<f64>,
    /// Doubling defect `|h_n - 4 h_{n-1}|`; absent for `n = 0`.
    pub defect: Option<f64>,
    /// Monte Carlo stderr of `scaled`.
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalHeight {
    pub value: f64,
    /// Tail estimate `C / (3 · 4ⁿ)` from the largest doubling defect `C` seen
    /// (at least the last scaled difference), plus the Monte Carlo error of
    /// the last term.
    pub error: f64,
    pub converged: bool,
    /// Exact order of `P` when the doubling sequence proved it torsion.
    pub torsion_order: Option<u64>,
    pub table: Vec<TateStep>,
}

pub const DEFAULT_TATE_TOL: f64 = 1e-3;
pub const DEFAULT_NCAP_Q: u32 = 12;
pub const DEFAULT_NCAP_QT: u32 = 8;
pub const DEFAULT_MCAP: u64 = 16;

/// `ĥ_x(P) = lim 4^{-n} h_x(2ⁿ P)`.
///
/// `|h(2Q) - 4 h(Q)|` is bounded on `E(K)`, so with `C` that bound the tail
/// after step `n` is at most `C / (3 · 4ⁿ)`. `C` is estimated by the largest
/// defect observed along the sequence. Iterates until two consecutive scaled
/// differences and the tail estimate are below `tol`, or `n = n_cap` (then
/// `converged` is false). If some `2ⁿ P` is `O`, or
/// `x(2ⁿ P)` repeats an earlier `x(2ᵏ P)`, the point is torsion and the
/// value is exactly 0.
pub fn canonical_height(
    curve: &EllipticCurve,
    p: &ECPoint,
    pol: PolarizationChoice,
    tol: f64,
    n_cap: u32,
    params: &MCParams,
) -> Result<CanonicalHeight> {
    if !curve.contains(p) {
        return Err(Error::NotOnCurve);
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let torsion = |table: Vec<TateStep>, order: u64| CanonicalHeight {
        value: 0.0,
        error: 0.0,
        converged: true,
        torsion_order: Some(order),
        table,
    };
    let mut table: Vec<TateStep> = Vec::new();
    let mut seen: Vec<ECPoint> = Vec::new();
    let mut q = p.clone();
    let mut small_diffs = 0;
    let mut defect_max = 0.0f64;
    let mut tail = f64::INFINITY;
    for n in 0..=n_cap {
        if q.is_infinity() {
            let order = curve.exact_order(p, 1u64 << n);
            return Ok(torsion(table, order));
        }
        if let Some(k) = seen.iter().position(|s| s.x() == q.x()) {
            // 2ⁿP = ±2ᵏP
            let multiple = if seen[k] == q { (1u64 << n) - (1u64 << k) } else { (1u64 << n) + (1u64 << k) };
            let order = curve.exact_order(p, multiple);
            return Ok(torsion(table, order));
        }
        let h = x_height(&q, pol, params)?;
        let scale = 4f64.powi(-(n as i32));
        let scaled = h.total * scale;
        let defect = table.last().map(|prev| (h.total - 4.0 * prev.h).abs());
        let diff = defect.map(|dv| dv * scale);
        table.push(TateStep { n, h: h.total, scaled, diff, defect, stderr: h.stderr * scale });
        if let (Some(dv), Some(df)) = (diff, defect) {
            defect_max = defect_max.max(df);
            tail = (defect_max * scale / 3.0).max(dv);
            small_diffs = if dv < tol { small_diffs + 1 } else { 0 };
            if small_diffs >= 2 && tail < tol {
                break;
            }
        }
        if n < n_cap {
            seen.push(q.clone());
            q = curve.double(&q);
        }
    }
    let last = table.last().expect("at least one step");
    Ok(CanonicalHeight {
        value: last.scaled,
        error: tail + last.stderr,
        converged: small_diffs >= 2 && tail < tol,
        torsion_order: None,
        table,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TorsionVerdict {
    /// `order · P = O`, checked exactly.
    Torsion { order: u64 },
    /// `ĥ(P)` exceeds three times its error estimate.
    NonTorsion { height: f64, error: f64 },
    Undecided { height: f64, error: f64 },
}

impl TorsionVerdict {
    pub fn is_torsion(&self) -> Option<bool> {
        match self {
            TorsionVerdict::Torsion { .. } => Some(true),
            TorsionVerdict::NonTorsion { .. } => Some(false),
            TorsionVerdict::Undecided { .. } => None,
        }
    }
}

/// Decides whether `P` is torsion: exact check of `m P` for `m ≤ m_cap`,
/// then the canonical height against three times its error.
pub fn is_torsion(
    curve: &EllipticCurve,
    p: &ECPoint,
    pol: PolarizationChoice,
    m_cap: u64,
    tol: f64,
    n_cap: u32,
    params: &MCParams,
) -> Result<TorsionVerdict> {
    if !curve.contains(p) {
        return Err(Error::NotOnCurve);
    }
    let mut q = p.clone();
    for m in 1..=m_cap {
        if q.is_infinity() {
            return Ok(TorsionVerdict::Torsion { order: m });
        }
        q = curve.add(&q, p);
    }
    let ch = canonical_height(curve, p, pol, tol, n_cap, params)?;
    if let Some(order) = ch.torsion_order {
        return Ok(TorsionVerdict::Torsion { order });
    }
    if ch.value > 3.0 * ch.error {
        Ok(TorsionVerdict::NonTorsion { height: ch.value, error: ch.error })
    } else {
        Ok(TorsionVerdict::Undecided { height: ch.value, error: ch.error })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_rational;

    fn rf(s: &str, nvars: usize) -> RF {
        parse_rational(s, nvars).unwrap()
    }

    fn curve(a4: &str, a6: &str, nvars: usize) -> EllipticCurve {
        EllipticCurve::short(rf(a4, nvars), rf(a6, nvars)).unwrap()
    }

    fn pt(e: &EllipticCurve, x: &str, y: &str) -> ECPoint {
        e.point(rf(x, e.nvars()), rf(y, e.nvars())).unwrap()
    }

    #[test]
    fn group_law_examples() {
        let e = curve("0", "1", 0);
        let p = pt(&e, "2", "3");
        let q = pt(&e, "0", "1");
        assert_eq!(e.add(&p, &q), pt(&e, "-1", "0"));
        assert_eq!(e.double(&q), pt(&e, "0", "-1"));
        assert_eq!(e.mul(&ECPoint::Infinity, 5), ECPoint::Infinity);
        assert_eq!(e.mul(&p, 6), ECPoint::Infinity);
        assert_eq!(e.add(&p, &e.neg(&p)), ECPoint::Infinity);
        assert_eq!(e.mul(&p, -1), e.neg(&p));
    }

    #[test]
    fn rejects_singular_and_off_curve() {
        assert_eq!(EllipticCurve::short(rf("0", 0), rf("0", 0)), Err(Error::SingularCurve));
        let e = curve("0", "1", 0);
        assert_eq!(e.point(rf("1", 0), rf("1", 0)), Err(Error::NotOnCurve));
    }

    #[test]
    fn long_form_negation() {
        // y^2 + xy + y = x^3 - x^2, a point and its negative
        let e = EllipticCurve::new([rf("1", 0), rf("-1", 0), rf("1", 0), rf("0", 0), rf("0", 0)]).unwrap();
        let p = pt(&e, "0", "0");
        let minus = e.neg(&p);
        assert!(e.contains(&minus));
        assert_eq!(e.add(&p, &minus), ECPoint::Infinity);
        let q = e.mul(&p, 3);
        assert!(e.contains(&q));
    }

    #[test]
    fn x_height_examples() {
        let params = MCParams::new(1000, 0);
        let e = curve("0", "-2", 1);
        let p = pt(&e, "3", "5");
        let h = x_height(&p, PolarizationChoice::Arithmetic, &params).unwrap();
        assert_eq!((h.total, h.stderr), (3f64.ln(), 0.0));
        assert_eq!(x_height(&p, PolarizationChoice::Geometric, &params).unwrap().total, 0.0);
        let e2 = curve("0", "t^2", 1);
        let q = pt(&e2, "0", "t");
        assert_eq!(x_height(&q, PolarizationChoice::Geometric, &params).unwrap().total, 0.0);
        assert_eq!(x_height(&ECPoint::Infinity, PolarizationChoice::Geometric, &params), Err(Error::PointAtInfinity));
    }

    #[test]
    fn torsion_by_doubling() {
        let params = MCParams::new(1000, 0);
        let e = curve("0", "1", 0);
        let ch = canonical_height(&e, &pt(&e, "2", "3"), PolarizationChoice::NumberField, 1e-3, 12, &params).unwrap();
        assert_eq!(ch.value, 0.0);
        assert_eq!(ch.torsion_order, Some(6));
        let e2 = curve("0", "t^2", 1);
        let q = pt(&e2, "0", "t");
        assert_eq!(e2.double(&q), e2.neg(&q));
        let ch = canonical_height(&e2, &q, PolarizationChoice::Arithmetic, 1e-3, 8, &params).unwrap();
        assert_eq!((ch.value, ch.torsion_order), (0.0, Some(3)));
    }

    #[test]
    fn is_torsion_examples() {
        let params = MCParams::new(1000, 0);
        let e = curve("0", "1", 0);
        let v = is_torsion(&e, &pt(&e, "2", "3"), PolarizationChoice::NumberField, 16, 1e-3, 12, &params).unwrap();
        assert_eq!(v, TorsionVerdict::Torsion { order: 6 });
        let e2 = curve("0", "t^2", 1);
        let v = is_torsion(&e2, &pt(&e2, "0", "t"), PolarizationChoice::Arithmetic, 16, 1e-3, 8, &params).unwrap();
        assert_eq!(v, TorsionVerdict::Torsion { order: 3 });
        let e3 = curve("0", "-2", 0);
        let v = is_torsion(&e3, &pt(&e3, "3", "5"), PolarizationChoice::NumberField, 16, 1e-3, 12, &params).unwrap();
        assert_eq!(v.is_torsion(), Some(false));
    }
}
