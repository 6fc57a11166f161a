//! Acceptance checks, one line per criterion.
//!
//! Run with `cargo test --test acceptance`; the process exits nonzero if any
//! criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use heightlab::arakelov::{fs_self_intersection, SIGMA};
use heightlab::archimedean::{jensen_log_complex, jensen_v1, v_measure, MCParams};
use heightlab::elliptic::{canonical_height, is_torsion, ECPoint, EllipticCurve, TorsionVerdict};
use heightlab::heights::{height_number_field, naive_height, naive_height_tuple, nevanlinna_t, PolarizationChoice};
use heightlab::northcott::{coeff_bound, enumerate_bounded, EnumSpec};
use heightlab::polyring::{parse_poly, parse_rational, MultiPoly, ProjectivePoint, RationalFunction};
use heightlab::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x4845_4947_4854 ^ stream)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pt(coords: &[&str], nvars: usize) -> ProjectivePoint {
    ProjectivePoint::from_polys(coords.iter().map(|c| parse_poly(c, nvars).unwrap()).collect()).unwrap()
}

fn random_poly(r: &mut ChaCha8Rng, nvars: usize, max_deg: u32, max_coeff: i64, terms: usize) -> MultiPoly {
    loop {
        let f = MultiPoly::from_terms(
            nvars,
            (0..terms).map(|_| {
                let m: Vec<u32> = (0..nvars).map(|_| r.random_range(0..=max_deg)).collect();
                (m, r.random_range(-max_coeff..=max_coeff))
            }),
        );
        if !f.is_zero() {
            return f;
        }
    }
}

fn big_to_f64(n: &num_bigint::BigInt) -> f64 {
    n.to_string().parse().expect("decimal integer")
}

fn jensen_values() -> Outcome {
    let mut r = rng(1);
    let mut worst = 0f64;
    for _ in 0..50 {
        // α = p/q with |α| ≤ 10, so v(q z - p) = q √(1 + α²) = √(p² + q²)
        let q: i64 = r.random_range(1..=1000);
        let p: i64 = r.random_range(-10 * q..=10 * q);
        let f = MultiPoly::from_terms(1, [(vec![1], q), (vec![0], -p)]);
        let want = ((p * p + q * q) as f64).sqrt();
        let got = jensen_v1(&f).map_err(|e| e.to_string())?;
        worst = worst.max((got - want).abs() / want);
    }
    for _ in 0..50 {
        let alpha = Complex64::from_polar(r.random_range(0.0..=10.0), r.random_range(0.0..std::f64::consts::TAU));
        let got = jensen_log_complex(&[-alpha, Complex64::new(1.0, 0.0)]).map_err(|e| e.to_string())?.unwrap();
        let want = 0.5 * alpha.norm_sqr().ln_1p();
        worst = worst.max((got.exp() - want.exp()).abs() / want.exp());
    }
    ensure(worst <= 1e-9, || format!("worst relative error {worst:e}"))?;
    Ok(format!("100 roots, worst relative error {worst:.1e}"))
}

fn coefficient_bound() -> Outcome {
    let mut r = rng(2);
    let mut worst = f64::INFINITY;
    for i in 0..200 {
        let nterms = r.random_range(1..=16);
        let f = random_poly(&mut r, 2, 3, 20, nterms);
        let est = v_measure(&f, &MCParams::new(100_000, i)).map_err(|e| e.to_string())?;
        let degs = f.degree_in(0).unwrap_or(0) + f.degree_in(1).unwrap_or(0);
        let log_bound = degs as f64 * 2f64.ln() + est.log_v.mean + 4.0 * est.log_v.stderr;
        let slack = log_bound - big_to_f64(&f.coeff_norm()).ln();
        ensure(slack >= 0.0, || format!("f = {f}: log bound short by {:e}", -slack))?;
        if !f.is_constant() {
            worst = worst.min(slack);
        }
    }
    Ok(format!("200 polynomials, smallest log margin {worst:.4} among nonconstant ones"))
}

fn sigma_check() -> Outcome {
    let s = fs_self_intersection(Some(&MCParams::new(1_000_000, 3))).map_err(|e| e.to_string())?;
    let est = s.check.ok_or("no Monte Carlo check was run")?;
    let z = (est.mean - SIGMA).abs() / est.stderr;
    ensure(s.value == 0.5 && z <= 4.0, || format!("sigma {} vs estimate {} ± {}", s.value, est.mean, est.stderr))?;
    Ok(format!("estimate {:.6} ± {:.1e} ({z:.2} stderr)", est.mean, est.stderr))
}

fn v_of_sum() -> Outcome {
    let f = parse_poly("z1 + z2", 2).unwrap();
    let est = v_measure(&f, &MCParams::new(1_000_000, 4)).map_err(|e| e.to_string())?;
    let z = (est.log_v.mean - 0.5).abs() / est.log_v.stderr;
    ensure(z <= 4.0, || format!("log v = {} ± {}", est.log_v.mean, est.log_v.stderr))?;
    Ok(format!("v = {:.6} vs e^(1/2) = {:.6} ({z:.2} stderr)", est.v, 0.5f64.exp()))
}

fn monomial_heights() -> Outcome {
    let mut parts = Vec::new();
    for m in [1u32, 2, 5] {
        let p = pt(&[&format!("z1^{m}"), "1"], 1);
        let h = naive_height(&p, PolarizationChoice::Arithmetic, &MCParams::new(1_000_000, 5))
            .map_err(|e| e.to_string())?;
        let want = m as f64 * 2f64.ln() / 2.0;
        let z = (h.total - want).abs() / h.stderr;
        ensure(z <= 4.0, || format!("m = {m}: {} ± {} vs {want}", h.total, h.stderr))?;
        parts.push(format!("m={m}: {z:.2}"));
    }
    Ok(format!("deviation in stderr {}", parts.join(", ")))
}

fn number_field_degeneration() -> Outcome {
    let mut r = rng(6);
    let mut count = 0;
    while count < 100 {
        let a: i64 = r.random_range(-1_000_000..=1_000_000);
        let b: i64 = r.random_range(-1_000_000..=1_000_000);
        if num_integer::Integer::gcd(&a, &b) != 1 {
            continue;
        }
        let h = height_number_field(&pt(&[&a.to_string(), &b.to_string()], 0)).map_err(|e| e.to_string())?;
        let want = (a.abs().max(b.abs()) as f64).ln();
        ensure(h.total == want && h.stderr == 0.0, || format!("({a}:{b}): {} vs {want}", h.total))?;
        count += 1;
    }
    Ok("100 coprime pairs, all exact".into())
}

fn projective_invariance() -> Outcome {
    let mut r = rng(7);
    let mut worst = 0f64;
    for i in 0..20 {
        let rf = |r: &mut ChaCha8Rng| {
            let (nt, dt) = (r.random_range(1..=3), r.random_range(1..=3));
            RationalFunction::new(random_poly(r, 1, 3, 9, nt), random_poly(r, 1, 2, 9, dt)).unwrap()
        };
        let base = vec![rf(&mut r), rf(&mut r)];
        let a = rf(&mut r);
        let scaled: Vec<RationalFunction> = base.iter().map(|c| c.mul(&a)).collect();
        let params = MCParams::new(50_000, 100 + i);
        let h0 = naive_height_tuple(&base, PolarizationChoice::Arithmetic, &params).map_err(|e| e.to_string())?;
        let h1 = naive_height_tuple(&scaled, PolarizationChoice::Arithmetic, &params).map_err(|e| e.to_string())?;
        let err = h0.stderr.hypot(h1.stderr);
        let gap = (h0.total - h1.total).abs();
        ensure(gap <= 4.0 * err + 1e-12, || format!("point {i}: {} vs {} (stderr {err})", h0.total, h1.total))?;
        if err > 0.0 {
            worst = worst.max(gap / err);
        }
        for pol in [PolarizationChoice::Geometric, PolarizationChoice::AuxiliaryA { slot: 1, c: 0.25 }] {
            let g0 = naive_height_tuple(&base, pol, &params).map_err(|e| e.to_string())?;
            let g1 = naive_height_tuple(&scaled, pol, &params).map_err(|e| e.to_string())?;
            ensure(g0.total == g1.total, || format!("point {i}, {pol:?}: {} vs {}", g0.total, g1.total))?;
        }
    }
    Ok(format!("20 points, arithmetic gap at most {worst:.2} stderr, geometric and auxiliary exact"))
}

fn northcott() -> Outcome {
    let params = MCParams::new(4_000, 8);
    let run = |m: f64, bound: Option<num_bigint::BigInt>| -> Result<Vec<ProjectivePoint>, String> {
        let mut spec = EnumSpec::new(m, 1, vec![0], params);
        spec.coeff_bound = bound;
        Ok(enumerate_bounded(&spec).map_err(|e| e.to_string())?.points.into_iter().map(|p| p.point).collect())
    };
    let expect = |list: &[[&str; 2]]| -> Vec<ProjectivePoint> { list.iter().map(|c| pt(c, 1)).collect() };
    let eight = expect(&[["0", "1"], ["1", "0"], ["1", "1"], ["1", "-1"], ["2", "1"], ["2", "-1"], ["1", "2"], ["1", "-2"]]);
    let four = expect(&[["0", "1"], ["1", "0"], ["1", "1"], ["1", "-1"]]);
    for (m, want) in [(2f64.ln(), &eight), (0.01, &four)] {
        let got = run(m, None)?;
        let same_set = got.len() == want.len() && want.iter().all(|p| got.contains(p));
        ensure(same_set, || format!("M = {m}: got {}", got.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")))?;
        let doubled = run(m, Some(coeff_bound(m, &[0]).unwrap() * 2))?;
        ensure(doubled == got, || format!("M = {m}: doubling the coefficient bound changed the output"))?;
    }
    Ok("8 points at M = log 2, 4 at M = 0.01, unchanged under a doubled bound".into())
}

fn curve(a4: &str, a6: &str, nvars: usize) -> EllipticCurve {
    EllipticCurve::short(parse_rational(a4, nvars).unwrap(), parse_rational(a6, nvars).unwrap()).unwrap()
}

fn on(e: &EllipticCurve, x: &str, y: &str) -> ECPoint {
    e.point(parse_rational(x, e.nvars()).unwrap(), parse_rational(y, e.nvars()).unwrap()).unwrap()
}

fn canonical_heights() -> Outcome {
    let params = MCParams::new(1_000, 9);
    let nf = PolarizationChoice::NumberField;
    let cases = [
        (curve("0", "1", 0), ("2", "3"), nf, 6, 12),
        (curve("0", "t^2", 1), ("0", "t"), PolarizationChoice::Arithmetic, 3, 8),
    ];
    for (e, (x, y), pol, order, ncap) in cases {
        let p = on(&e, x, y);
        let h = canonical_height(&e, &p, pol, 1e-3, ncap, &params).map_err(|e| e.to_string())?;
        ensure(h.value == 0.0 && h.error == 0.0 && h.torsion_order == Some(order), || format!("({x},{y}): {h:?}"))?;
        let v = is_torsion(&e, &p, pol, 16, 1e-3, ncap, &params).map_err(|e| e.to_string())?;
        ensure(v == TorsionVerdict::Torsion { order }, || format!("({x},{y}): {v:?}"))?;
    }
    let e = curve("0", "-2", 0);
    let p = on(&e, "3", "5");
    let h1 = canonical_height(&e, &p, nf, 1e-3, 12, &params).map_err(|e| e.to_string())?;
    ensure(h1.value > 3.0 * h1.error, || format!("(3,5): {} ± {}", h1.value, h1.error))?;
    let h2 = canonical_height(&e, &e.double(&p), nf, 1e-3, 12, &params).map_err(|e| e.to_string())?;
    let gap = (h2.value - 4.0 * h1.value).abs();
    let err = h2.error + 4.0 * h1.error;
    ensure(gap <= err, || format!("|h(2P) - 4h(P)| = {gap:e} > {err:e}"))?;
    Ok(format!("orders 6 and 3 certified; h(3,5) = {:.6} ± {:.1e}, quadraticity gap {gap:.1e} <= {err:.1e}", h1.value, h1.error))
}

fn constant_point_contrast() -> Outcome {
    let params = MCParams::new(1_000, 10);
    let e = curve("0", "-2", 1);
    let p = on(&e, "3", "5");
    let geom = canonical_height(&e, &p, PolarizationChoice::Geometric, 1e-3, 8, &params).map_err(|e| e.to_string())?;
    ensure(geom.value == 0.0 && geom.error == 0.0, || format!("geometric: {geom:?}"))?;
    let arith = canonical_height(&e, &p, PolarizationChoice::Arithmetic, 1e-3, 8, &params).map_err(|e| e.to_string())?;
    ensure(arith.value > 3.0 * arith.error, || format!("arithmetic: {} ± {}", arith.value, arith.error))?;
    Ok(format!("geometric 0, arithmetic {:.6} ± {:.1e}", arith.value, arith.error))
}

fn nevanlinna() -> Outcome {
    let params = MCParams::new(1 << 14, 11).with_batch_size(1 << 10);
    let z = parse_rational("z", 1).unwrap();
    let t = nevanlinna_t(&z, 2.0, &params).map_err(|e| e.to_string())?;
    ensure((t.value - 2f64.ln()).abs() <= 1e-6, || format!("T_z(2) = {}", t.value))?;
    let mut r = rng(11);
    let mut tested = 0;
    let mut skipped = 0;
    while tested < 20 {
        let nt = r.random_range(1..=4);
        let num = random_poly(&mut r, 1, 3, 9, nt);
        let mut den = random_poly(&mut r, 1, 3, 9, 2);
        // no pole at the origin
        den = &(&den * &parse_poly("z1", 1).unwrap()) + &MultiPoly::constant(r.random_range(1..=9), 1);
        let f = RationalFunction::new(num, den).unwrap();
        let mut values = Vec::new();
        let mut hit_circle = false;
        for radius in [1.1, 2.0, 5.0, 10.0] {
            match nevanlinna_t(&f, radius, &params) {
                Ok(v) => values.push(v),
                Err(Error::PoleOnCircle { .. }) => hit_circle = true,
                Err(e) => return Err(format!("f = {f}: {e}")),
            }
        }
        if hit_circle {
            skipped += 1;
            continue;
        }
        for w in values.windows(2) {
            let tol = 4.0 * w[0].proximity.stderr.hypot(w[1].proximity.stderr) + 1e-9;
            ensure(w[1].value + tol >= w[0].value, || format!("f = {f}: {} then {}", w[0].value, w[1].value))?;
        }
        tested += 1;
    }
    Ok(format!("T_z(2) - log 2 = {:.1e}; 20 functions monotone ({skipped} redrawn for a pole on a circle)", t.value - 2f64.ln()))
}

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_heightlab"))
        .args(args)
        .env_remove("HEIGHTLAB_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stdout)));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let commands: &[&[&str]] = &[
        &["measure", "v", "--poly", "z1^2 + z1*z2 - 3", "--vars", "2", "--samples", "200000", "--seed", "7"],
        &["height", "point", "--point", "[z1^2 + 1, 3*z1]", "--samples", "200000", "--seed", "7"],
        &["height", "point", "--point", "[z1 + z2, z1*z2 - 1, 2]", "--vars", "2", "--samples", "100000"],
        &["height", "enumerate", "--M", "0.6", "--caps", "[1]", "--samples", "4000", "--seed", "7"],
        &["ec", "canonical-height", "--curve", "[0, -2]", "--point", "(3, 5)", "--pol", "nf"],
        &["ec", "canonical-height", "--curve", "[0, -2]", "--point", "(3, 5)", "--vars", "1", "--ncap", "5"],
        &["ec", "is-torsion", "--curve", "[0, t^2]", "--point", "(0, t)"],
        &["arakelov", "constants", "--verify", "--samples", "200000", "--c", "0.5"],
        &["nevanlinna", "T", "--f", "(z^2 + 1)/(z - 3)", "--r", "5", "--samples", "65536"],
    ];
    for cmd in commands {
        let first = cli(cmd)?;
        let again = cli(cmd)?;
        ensure(first == again, || format!("{cmd:?}: two runs differ"))?;
        for threads in ["1", "4"] {
            let mut args = cmd.to_vec();
            args.extend(["--threads", threads]);
            let other = cli(&args)?;
            ensure(other == first, || format!("{cmd:?}: --threads {threads} differs"))?;
        }
    }
    Ok(format!("{} commands byte-identical across repeats and 1 vs 4 threads", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "Jensen values of linear polynomials", Duration::from_secs(1), jensen_values),
        (2, "coefficient bound by v", Duration::from_secs(120), coefficient_bound),
        (3, "self-intersection 1/2 by Monte Carlo", Duration::from_secs(5), sigma_check),
        (4, "v(z1 + z2) = e^(1/2)", Duration::from_secs(30), v_of_sum),
        (5, "heights of (z^m : 1)", Duration::from_secs(30), monomial_heights),
        (6, "number-field degeneration", Duration::from_secs(1), number_field_degeneration),
        (7, "projective invariance", Duration::from_secs(120), projective_invariance),
        (8, "bounded-height enumeration", Duration::from_secs(60), northcott),
        (9, "canonical heights and torsion", Duration::from_secs(180), canonical_heights),
        (10, "constant point, geometric vs arithmetic", Duration::from_secs(180), constant_point_contrast),
        (11, "Nevanlinna characteristic", Duration::from_secs(30), nevanlinna),
        (12, "deterministic CLI output", Duration::from_secs(300), determinism),
    ];
    let mut failed = 0;
    for (n, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let line = match outcome {
            Ok(detail) if took <= budget => format!("PASS criterion {n}: {name}: {detail} [{:.2}s]", took.as_secs_f64()),
            Ok(detail) => {
                failed += 1;
                format!("FAIL criterion {n}: {name}: {detail}, but took {:.2}s > {:?}", took.as_secs_f64(), budget)
            }
            Err(why) => {
                failed += 1;
                format!("FAIL criterion {n}: {name}: {why} [{:.2}s]", took.as_secs_f64())
            }
        };
        println!("{line}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
