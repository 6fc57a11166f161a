use heightlab::archimedean::MCParams;
use heightlab::elliptic::{canonical_height, is_torsion, ECPoint, EllipticCurve, TorsionVerdict};
use heightlab::heights::PolarizationChoice;
use heightlab::polyring::{parse_rational, RationalFunction};
use proptest::prelude::*;

fn rf(s: &str, nvars: usize) -> RationalFunction {
    parse_rational(s, nvars).unwrap()
}

fn short(a4: &str, a6: &str, nvars: usize) -> EllipticCurve {
    EllipticCurve::short(rf(a4, nvars), rf(a6, nvars)).unwrap()
}

fn pt(e: &EllipticCurve, x: &str, y: &str) -> ECPoint {
    e.point(rf(x, e.nvars()), rf(y, e.nvars())).unwrap()
}

const NF: PolarizationChoice = PolarizationChoice::NumberField;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn group_axioms(a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, d in -3i64..=3, e in -3i64..=3, f in -3i64..=3) {
        // y^2 = x^3 + 17 has the independent points (-1, 4) and (2, 5)
        let curve = short("0", "17", 0);
        let p1 = pt(&curve, "-1", "4");
        let p2 = pt(&curve, "2", "5");
        let combo = |m: i64, k: i64| curve.add(&curve.mul(&p1, m), &curve.mul(&p2, k));
        let (p, q, r) = (combo(a, b), combo(c, d), combo(e, f));
        prop_assert!(curve.contains(&p) && curve.contains(&q) && curve.contains(&r));
        prop_assert_eq!(curve.add(&p, &q), curve.add(&q, &p));
        prop_assert_eq!(curve.add(&curve.add(&p, &q), &r), curve.add(&p, &curve.add(&q, &r)));
        prop_assert_eq!(curve.add(&p, &curve.neg(&p)), ECPoint::Infinity);
        prop_assert_eq!(curve.add(&p, &ECPoint::Infinity), p.clone());
        prop_assert_eq!(curve.mul(&p, 3), curve.add(&p, &curve.double(&p)));
    }
}

#[test]
fn group_axioms_over_function_field() {
    let curve = short("1", "t^2", 1);
    let p = pt(&curve, "0", "t");
    let q = curve.double(&p);
    let r = curve.mul(&p, 3);
    assert!(curve.contains(&q) && curve.contains(&r));
    assert_eq!(curve.add(&curve.add(&p, &q), &r), curve.add(&p, &curve.add(&q, &r)));
    assert_eq!(curve.sub(&r, &q), p);
}

#[test]
fn quadraticity_over_q() {
    let params = MCParams::new(1000, 0);
    let curve = short("0", "-2", 0);
    let p = pt(&curve, "3", "5");
    let h1 = canonical_height(&curve, &p, NF, 1e-3, 12, &params).unwrap();
    assert!(h1.converged);
    assert!(h1.value > 3.0 * h1.error);
    for m in [2i64, 3] {
        let hm = canonical_height(&curve, &curve.mul(&p, m), NF, 1e-3, 12, &params).unwrap();
        let m2 = (m * m) as f64;
        assert!((hm.value - m2 * h1.value).abs() <= hm.error + m2 * h1.error, "m={m}: {hm:?} vs {h1:?}");
    }
}

#[test]
fn parallelogram_law() {
    let params = MCParams::new(1000, 0);
    let curve = short("0", "17", 0);
    let p = pt(&curve, "-1", "4");
    let q = pt(&curve, "2", "5");
    let h = |x: &ECPoint| canonical_height(&curve, x, NF, 1e-3, 12, &params).unwrap();
    let (hs, hd, hp, hq) = (h(&curve.add(&p, &q)), h(&curve.sub(&p, &q)), h(&p), h(&q));
    let err = hs.error + hd.error + 2.0 * hp.error + 2.0 * hq.error;
    assert!((hs.value + hd.value - 2.0 * hp.value - 2.0 * hq.value).abs() <= 6.0 * err);
}

#[test]
fn canonical_height_is_nonnegative() {
    let params = MCParams::new(1000, 0);
    let curve = short("0", "17", 0);
    for (x, y) in [("-2", "3"), ("4", "9"), ("8", "23"), ("43", "282"), ("52", "375")] {
        let h = canonical_height(&curve, &pt(&curve, x, y), NF, 1e-3, 12, &params).unwrap();
        assert!(h.value >= -3.0 * h.error, "{x},{y}: {h:?}");
    }
}

#[test]
fn certified_torsion_has_zero_height() {
    let params = MCParams::new(1000, 0);
    // y^2 = x^3 + 1 has torsion group Z/6
    let curve = short("0", "1", 0);
    for (x, y, order) in [("2", "3", 6), ("0", "1", 3), ("-1", "0", 2), ("2", "-3", 6)] {
        let p = pt(&curve, x, y);
        let h = canonical_height(&curve, &p, NF, 1e-3, 12, &params).unwrap();
        assert_eq!((h.value, h.torsion_order), (0.0, Some(order)));
        let v = is_torsion(&curve, &p, NF, 16, 1e-3, 12, &params).unwrap();
        assert_eq!(v, TorsionVerdict::Torsion { order });
    }
}

#[test]
fn constant_point_contrast() {
    let params = MCParams::new(1000, 0);
    let curve = short("0", "-2", 1);
    let p = pt(&curve, "3", "5");
    let geom = canonical_height(&curve, &p, PolarizationChoice::Geometric, 1e-3, 8, &params).unwrap();
    assert_eq!(geom.value, 0.0);
    assert_eq!(geom.error, 0.0);
    let arith = canonical_height(&curve, &p, PolarizationChoice::Arithmetic, 1e-3, 8, &params).unwrap();
    assert!(arith.value > 3.0 * arith.error, "{arith:?}");
}

#[test]
fn geometric_quadraticity_over_function_field() {
    let params = MCParams::new(1000, 0);
    let curve = short("1", "t^2", 1);
    let p = pt(&curve, "0", "t");
    let pol = PolarizationChoice::Geometric;
    let h1 = canonical_height(&curve, &p, pol, 0.05, 4, &params).unwrap();
    let h2 = canonical_height(&curve, &curve.double(&p), pol, 0.05, 3, &params).unwrap();
    assert!(h1.value > 0.0);
    assert!((h2.value - 4.0 * h1.value).abs() <= h2.error + 4.0 * h1.error, "{h1:?} {h2:?}");
}
