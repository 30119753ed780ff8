use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use weilcount::arith::PrimePower;
use weilcount::batteries;
use weilcount::counts::{certify_ordinary_lower_bound, verify_error_terms};
use weilcount::enclosure::{Enclosure, Verdict};
use weilcount::lattice::{count_weil_points, weil_point_counts, weil_points, EnumerationConfig};
use weilcount::order::{admissible_interval, realize, verify_realization, OrderQuery};
use weilcount::volume::{mc_volume, v_exact};
use weilcount::weil::WeilCandidate;

use crate::{Cli, Command, Failure, Outcome};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Command name and echoed parameters, available even when the command fails.
pub fn describe(cmd: &Command) -> (&'static str, Value) {
    match cmd {
        Command::Volume { n, mc } => ("volume", json!({ "n": n, "mc": mc })),
        Command::Count {
            q,
            n,
            report,
            divisor,
            batch,
        } => (
            "count",
            json!({ "q": q, "n": n, "report": report, "divisor": divisor, "batch": batch }),
        ),
        Command::Order { q, n, m } => ("order", json!({ "q": q, "n": n, "m": m })),
        Command::Check { q, coefficients } => ("check", json!({ "q": q, "coefficients": coefficients })),
        Command::VerifyBounds { samples } => ("verify-bounds", json!({ "samples": samples })),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let (command, params) = describe(&cli.command);
    let config = EnumerationConfig::with_budget(cli.budget);
    let (result, verdicts, cache_hit) = match &cli.command {
        Command::Volume { n, mc } => volume(*n, *mc, cli.seed)?,
        Command::Count {
            batch: Some(b), ..
        } => batch(b[0], b[1], b[2] as usize, &config)?,
        Command::Count {
            q,
            n,
            report,
            divisor,
            ..
        } => {
            let (Some(q), Some(n)) = (q, n) else {
                return Err(Failure::Usage("count needs Q and N, or --batch QMIN QMAX N".into()));
            };
            count(cli.cache_dir.as_deref(), prime_power(*q)?, *n, *report, *divisor, &config)?
        }
        Command::Order { q, n, m } => order(*q, *n, *m)?,
        Command::Check { q, coefficients } => check(*q, coefficients)?,
        Command::VerifyBounds { samples } => verify_bounds(*samples, cli.seed),
    };
    Ok(Outcome {
        command,
        params,
        result,
        verdicts,
        cache_hit,
    })
}

type Produced = (Value, Value, bool);

fn prime_power(q: u64) -> Result<PrimePower, Failure> {
    PrimePower::new(q).map_err(|_| Failure::Usage(format!("q = {q} is not a prime power")))
}

fn rational(r: &BigRational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

fn enclosure(e: &Enclosure) -> Value {
    json!({
        "lo": rational(e.lo()),
        "hi": rational(e.hi()),
        "approx": format!("≈{}", significant(e.midpoint_f64())),
        "note": "certified enclosure; approx is a rounded midpoint",
    })
}

fn significant(x: f64) -> String {
    format!("{x:.6e}")
}

fn verdict(v: Verdict) -> Value {
    Value::from(v.as_str())
}

fn holds(b: bool) -> Value {
    verdict(if b { Verdict::Holds } else { Verdict::Fails })
}

fn volume(n: u32, mc: Option<u64>, seed: u64) -> Result<Produced, Failure> {
    let v = v_exact(n)?;
    let approx = Enclosure::exact(v.clone()).midpoint_f64();
    let mut result = json!({
        "n": n,
        "volume": rational(&v),
        "approx": format!("≈{approx:.10}"),
    });
    let mut verdicts = json!({});
    if let Some(samples) = mc {
        let est = mc_volume(n, samples, seed)?;
        let sigma = if est.std_error > 0.0 {
            (est.estimate - approx).abs() / est.std_error
        } else if est.estimate == approx {
            0.0
        } else {
            f64::INFINITY
        };
        result["mc"] = json!({
            "samples": est.samples,
            "seed": seed,
            "estimate": est.estimate,
            "std_error": est.std_error,
            "deviation_sigma": sigma,
        });
        verdicts["mc_within_3_sigma"] = holds(sigma <= 3.0);
    }
    Ok((result, verdicts, false))
}

fn cache_path(dir: &Path, q: u64, n: usize, d: u64, report: bool) -> PathBuf {
    dir.join(format!("count-q{q}-n{n}-d{d}-r{}-v{VERSION}.json", u8::from(report)))
}

fn count(
    cache_dir: Option<&Path>,
    q: PrimePower,
    n: usize,
    report: bool,
    divisor: Option<u64>,
    config: &EnumerationConfig,
) -> Result<Produced, Failure> {
    let d = divisor.unwrap_or(0);
    let path = cache_dir.map(|dir| cache_path(dir, q.q(), n, d, report));
    if let Some(p) = &path {
        if let Some(cached) = fs::read_to_string(p).ok().and_then(|s| serde_json::from_str::<Value>(&s).ok()) {
            if let (Some(r), Some(v)) = (cached.get("result"), cached.get("verdicts")) {
                return Ok((r.clone(), v.clone(), true));
            }
        }
    }
    let (result, verdicts) = compute_count(q, n, report, divisor, config)?;
    if let Some(p) = &path {
        let doc = json!({ "result": result, "verdicts": verdicts });
        if let Some(parent) = p.parent() {
            let _ = fs::create_dir_all(parent);
        }
        fs::write(p, crate::render::canonical(&doc))
            .map_err(|e| Failure::Internal(format!("cannot write cache file {}: {e}", p.display())))?;
    }
    Ok((result, verdicts, false))
}

fn compute_count(
    q: PrimePower,
    n: usize,
    report: bool,
    divisor: Option<u64>,
    config: &EnumerationConfig,
) -> Result<(Value, Value), Failure> {
    let mut verdicts = json!({});
    let mut result = if report && n >= 2 {
        let r = verify_error_terms(q, n, config)?;
        let lb = certify_ordinary_lower_bound(q, n, r.ordinary_count)?;
        verdicts = json!({
            "ordinary_error": verdict(r.ordinary_error),
            "nonordinary_lower": holds(r.nonordinary_lower_holds),
            "nonordinary_upper": verdict(r.nonordinary_upper),
            "ordinary_lower_bound": verdict(lb.verdict),
        });
        json!({
            "q": q.q(),
            "n": n,
            "ordinary": r.ordinary_count.to_string(),
            "lambda": r.lambda_count.to_string(),
            "lambda_p": r.lambda_p_count.to_string(),
            "lambda_s": r.lambda_s_count.to_string(),
            "evaluations": r.evaluations.to_string(),
            "report": {
                "prediction": enclosure(&r.prediction),
                "ordinary_error_bound": enclosure(&r.bound_rhs),
                "ordinary_previous_dimension": r.nonordinary_lower.to_string(),
                "nonordinary_upper_bound": enclosure(&r.nonordinary_upper_rhs),
                "ordinary_lower_bound": enclosure(&lb.rhs),
            },
        })
    } else {
        let c = weil_point_counts(q, n, config)?;
        let ordinary = c.total - c.p_divisible;
        let mut v = counts_json(q.q(), n, ordinary, c.total, c.p_divisible, c.s_divisible);
        v["evaluations"] = Value::from(c.evaluations.to_string());
        if report {
            let lb = certify_ordinary_lower_bound(q, n, ordinary)?;
            v["report"] = json!({ "ordinary_lower_bound": enclosure(&lb.rhs) });
            verdicts = json!({
                "ordinary_error": "not-applicable",
                "nonordinary_lower": "not-applicable",
                "nonordinary_upper": "not-applicable",
                "ordinary_lower_bound": verdict(lb.verdict),
            });
        }
        v
    };
    if let Some(d) = divisor {
        let k = count_weil_points(q, n, d, config).map_err(|e| match e {
            weilcount::Error::Domain(m) => Failure::Usage(m),
            other => other.into(),
        })?;
        result["divisor"] = json!({ "d": d, "count": k.to_string() });
    }
    Ok((result, verdicts))
}

fn counts_json(q: u64, n: usize, ordinary: u64, total: u64, p: u64, s: u64) -> Value {
    json!({
        "q": q,
        "n": n,
        "ordinary": ordinary.to_string(),
        "lambda": total.to_string(),
        "lambda_p": p.to_string(),
        "lambda_s": s.to_string(),
    })
}

fn batch(qmin: u64, qmax: u64, n: usize, config: &EnumerationConfig) -> Result<Produced, Failure> {
    if qmin > qmax {
        return Err(Failure::Usage(format!("empty range {qmin}..={qmax}")));
    }
    let mut rows = Vec::new();
    for q in qmin..=qmax {
        let Ok(pq) = PrimePower::new(q) else { continue };
        let set = weil_points(pq, n, config)?;
        let total = set.total();
        let p = set.count_divisible(pq.p());
        rows.push(counts_json(q, n, total - p, total, p, set.count_divisible(pq.s())));
    }
    Ok((json!({ "rows": rows }), json!({}), false))
}

fn order(q: u64, n: usize, m: u64) -> Result<Produced, Failure> {
    prime_power(q)?;
    if n < 2 {
        return Err(Failure::Usage("order needs n >= 2".into()));
    }
    if m == 0 {
        return Err(Failure::Usage("order needs m >= 1".into()));
    }
    let query = OrderQuery::new(q, n, m)?;
    let refuse = |message: String| -> Failure {
        let detail = match admissible_interval(q, n) {
            Ok((lo, hi)) => json!({ "admissible_interval": { "lo": lo.to_string(), "hi": hi.to_string() } }),
            Err(_) => Value::Null,
        };
        Failure::Domain { message, detail }
    };
    let r = match realize(&query) {
        Ok(r) => r,
        Err(weilcount::Error::Domain(msg)) => return Err(refuse(msg)),
        Err(e) => return Err(e.into()),
    };
    let f = r.candidate.expand();
    let result = json!({
        "a": r.candidate.a(),
        "f": f.to_string(),
        "f_coefficients": f.coeffs().iter().map(BigInt::to_string).collect::<Vec<_>>(),
        "f_at_1": r.candidate.value_at_one().to_string(),
        "method": r.method.to_string(),
        "certificate": r.certificate.to_string(),
        "repaired": r.repaired,
    });
    let verdicts = json!({ "verified": holds(verify_realization(&r.candidate, m)) });
    Ok((result, verdicts, false))
}

fn check(q: u64, coefficients: &[i64]) -> Result<Produced, Failure> {
    let pq = prime_power(q)?;
    if coefficients.is_empty() {
        return Err(Failure::Usage("at least one coefficient is required".into()));
    }
    let w = WeilCandidate::with_prime_power(pq, coefficients.to_vec())?;
    let weil = w.is_weil();
    let ordinary = if weil { Some(w.is_ordinary()?) } else { None };
    let f = w.expand();
    let np = w.newton_polygon();
    let vertices: Vec<Value> = np
        .vertices()
        .iter()
        .map(|(x, y)| json!({ "x": x, "y": { "num": y.numer().to_string(), "den": y.denom().to_string() } }))
        .collect();
    let result = json!({
        "weil": weil,
        "ordinary": ordinary,
        "f": f.to_string(),
        "f_coefficients": f.coeffs().iter().map(BigInt::to_string).collect::<Vec<_>>(),
        "trace_polynomial": w.trace_poly().to_string(),
        "passes_nonordinary_filter": w.passes_nonordinary_filter(),
        "f_at_1": w.value_at_one().to_string(),
        "newton_polygon": {
            "vertices": vertices,
            "integer_vertices": np.has_integer_vertices(),
        },
    });
    Ok((result, json!({}), false))
}

fn verify_bounds(samples: u64, seed: u64) -> Produced {
    let outcomes = batteries::all(samples, seed);
    let mut verdicts = serde_json::Map::new();
    let rows: Vec<Value> = outcomes
        .iter()
        .map(|b| {
            verdicts.insert(b.name.to_string(), holds(b.passed()));
            json!({
                "name": b.name,
                "trials": b.trials,
                "violations": b.violations,
                "worst_ratio": b.worst_ratio,
            })
        })
        .collect();
    (json!({ "batteries": rows, "seed": seed }), Value::Object(verdicts), false)
}
