use heightlab::arakelov::{arithmetic_e, auxiliary_e, fs_self_intersection};
use heightlab::archimedean::v_measure;
use heightlab::elliptic::{
    canonical_height, is_torsion, EllipticCurve, TorsionVerdict, DEFAULT_NCAP_Q, DEFAULT_NCAP_QT,
};
use heightlab::heights::{naive_height, nevanlinna_t};
use heightlab::northcott::{enumerate_bounded, Class, EnumSpec};
use heightlab::polyring::{normalize_projective, parse_rational, split_list, RationalFunction};
use heightlab::{Error, Result};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::{
    ArakelovCommand, Cli, Command, EcArgs, EcCommand, HeightCommand, MeasureCommand, NevanlinnaCommand,
    PolyCommand,
};

pub fn run(cli: &Cli) -> Result<Value> {
    let cfg = &cli.config;
    let params = cfg.params();
    match &cli.command {
        Command::Poly(PolyCommand::Parse { poly, vars }) => poly_parse(poly, *vars),
        Command::Measure(MeasureCommand::V { poly, vars }) => {
            let f = parse_rational(poly, *vars)?;
            if !f.is_polynomial() {
                return Err(Error::InvalidArgument("v is defined for polynomials".into()));
            }
            let v = v_measure(f.num(), &params)?;
            Ok(json!({
                "v": v.v,
                "stderr": v.log_v.stderr,
                "log_v": v.log_v.mean,
                "samples": v.log_v.samples_used,
                "seed": v.log_v.seed,
            }))
        }
        Command::Height(HeightCommand::Point { pol, point, vars }) => {
            let coords = parse_coords(point, *vars)?;
            let pt = normalize_projective(&coords)?;
            let h = naive_height(&pt, pol.0, &params)?;
            Ok(json!({
                "point": pt.to_string(),
                "exact_part": h.exact_part,
                "arch_mean": h.arch_part.mean,
                "arch_stderr": h.arch_part.stderr,
                "total": h.total,
                "seed": h.arch_part.seed,
                "samples": h.arch_part.samples_used,
            }))
        }
        Command::Height(HeightCommand::Enumerate { m, vars, dim, caps, band, coeff_bound }) => {
            let caps = split_list(caps)?
                .iter()
                .map(|c| c.parse::<u32>().map_err(|_| Error::InvalidArgument(format!("bad degree cap `{c}`"))))
                .collect::<Result<Vec<u32>>>()?;
            let mut spec = EnumSpec::new(*m, *dim, caps, params);
            spec.d = *vars;
            spec.classify_band = *band;
            spec.budget = cfg.budget;
            spec.coeff_bound = coeff_bound.map(BigInt::from);
            let res = enumerate_bounded(&spec)?;
            Ok(Value::Array(
                res.points
                    .iter()
                    .map(|p| {
                        json!({
                            "point": p.point.to_string(),
                            "total": p.height.total,
                            "stderr": p.height.stderr,
                            "class": match p.class {
                                Class::Certain => "certain",
                                Class::Borderline => "borderline",
                            },
                        })
                    })
                    .collect(),
            ))
        }
        Command::Ec(EcCommand::CanonicalHeight(args)) => {
            let (curve, p, ncap) = ec_input(args)?;
            let ch = canonical_height(&curve, &p, args.pol.0, args.tol, ncap, &params)?;
            let table: Vec<Value> = ch
                .table
                .iter()
                .map(|s| json!({"n": s.n, "h_n": s.h, "scaled": s.scaled, "diff": s.diff, "stderr": s.stderr}))
                .collect();
            Ok(json!({
                "value": ch.value,
                "error": ch.error,
                "converged": ch.converged,
                "torsion_order": ch.torsion_order,
                "table": table,
            }))
        }
        Command::Ec(EcCommand::IsTorsion { args, mcap }) => {
            let (curve, p, ncap) = ec_input(args)?;
            let verdict = is_torsion(&curve, &p, args.pol.0, *mcap, args.tol, ncap, &params)?;
            Ok(match verdict {
                TorsionVerdict::Torsion { order } => json!({"torsion": true, "verdict": "torsion", "order": order}),
                TorsionVerdict::NonTorsion { height, error } => {
                    json!({"torsion": false, "verdict": "non_torsion", "height": height, "error": error})
                }
                TorsionVerdict::Undecided { height, error } => {
                    json!({"torsion": null, "verdict": "undecided", "height": height, "error": error})
                }
            })
        }
        Command::Arakelov(ArakelovCommand::Constants { max_d, c, verify }) => {
            let sigma = fs_self_intersection(verify.then_some(&params))?;
            let mut out = Map::new();
            out.insert("sigma".into(), json!(sigma.value));
            let e: Map<String, Value> = (1..=*max_d).map(|d| (d.to_string(), json!(arithmetic_e(d)))).collect();
            out.insert("e".into(), Value::Object(e));
            if let Some(c) = c {
                let mut aux = Map::new();
                for d in 1..=*max_d {
                    aux.insert(d.to_string(), json!(auxiliary_e(*c, d)?));
                }
                out.insert("aux_e".into(), Value::Object(aux));
            }
            if let Some(est) = sigma.check {
                out.insert(
                    "sigma_check".into(),
                    json!({"mean": est.mean, "stderr": est.stderr, "samples": est.samples_used, "seed": est.seed}),
                );
            }
            Ok(Value::Object(out))
        }
        Command::Nevanlinna(NevanlinnaCommand::T { f, r }) => {
            let f = parse_rational(f, 1)?;
            let t = nevanlinna_t(&f, *r, &params)?;
            Ok(json!({
                "T": t.value,
                "counting": t.counting,
                "proximity": t.proximity.mean,
                "proximity_err": t.proximity.stderr,
                "nodes": t.proximity.samples_used,
            }))
        }
    }
}

fn poly_parse(text: &str, vars: usize) -> Result<Value> {
    let f = parse_rational(text, vars)?;
    if !f.is_polynomial() {
        return Ok(json!({"num": f.num().to_string(), "den": f.den().to_string(), "nvars": vars}));
    }
    let p = f.num();
    let degrees: Vec<Option<u32>> = (0..vars).map(|v| p.degree_in(v)).collect();
    Ok(json!({
        "poly": p.to_string(),
        "nvars": vars,
        "degrees": degrees,
        "total_degree": p.total_degree(),
        "terms": p.num_terms(),
        "coeff_norm": p.coeff_norm().to_string(),
    }))
}

fn parse_coords(text: &str, vars: usize) -> Result<Vec<RationalFunction>> {
    split_list(text)?.iter().map(|c| parse_rational(c, vars)).collect()
}

fn ec_input(args: &EcArgs) -> Result<(EllipticCurve, heightlab::elliptic::ECPoint, u32)> {
    let curve_items = split_list(&args.curve)?;
    let point_items = split_list(&args.point)?;
    let vars = args.vars.unwrap_or_else(|| {
        let uses_t = curve_items.iter().chain(&point_items).any(|s| s.contains('t') || s.contains('z'));
        usize::from(uses_t)
    });
    let parse = |s: &String| parse_rational(s, vars);
    let coeffs = curve_items.iter().map(parse).collect::<Result<Vec<_>>>()?;
    let curve = match <[RationalFunction; 5]>::try_from(coeffs) {
        Ok(all) => EllipticCurve::new(all)?,
        Err(v) if v.len() == 2 => {
            let [a4, a6] = <[RationalFunction; 2]>::try_from(v).expect("two entries");
            EllipticCurve::short(a4, a6)?
        }
        Err(v) => {
            return Err(Error::InvalidArgument(format!("a curve needs 2 or 5 coefficients, got {}", v.len())));
        }
    };
    let [x, y] = <[String; 2]>::try_from(point_items)
        .map_err(|v| Error::InvalidArgument(format!("a point needs 2 coordinates, got {}", v.len())))?;
    let p = curve.point(parse(&x)?, parse(&y)?)?;
    let ncap = args.ncap.unwrap_or(if vars == 0 { DEFAULT_NCAP_Q } else { DEFAULT_NCAP_QT });
    Ok((curve, p, ncap))
}
