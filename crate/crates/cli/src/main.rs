use std::fmt::Write as _;
use std::process::ExitCode;

use ballmap::engine::{verify_identity_battery, Status};
use ballmap::maps::{boundary_point, sample_boundary_points, Model, RationalMap};
use ballmap::monomial::{self, FeasibilityReport, Pattern};
use ballmap::normal_form::{normalize_thm21, summarize, thm21_clauses};
use ballmap::normalize::{geometric_rank, normalize_lemma21, rank_of_a, siegel_form};
use ballmap::pipeline::self_check;
use ballmap::spans::{gap_profile, in_gap, jet_span, thm11_applies};
use ballmap::{catalog, Complex64, Error, GaussianRational as Q, HoloPoly, Mode, Scalar};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ballmap", version, about = "Verify proper rational maps between balls and Siegel domains")]
struct Cli {
    /// Arithmetic: exact Gaussian rationals or binary64 complex floats.
    #[arg(long, global = true, default_value = "exact")]
    mode: Mode,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit the JSON report instead of the table.
    #[arg(long, global = true)]
    json: bool,
    /// Relative tolerance for float decisions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact (or float) properness certificate.
    VerifyProper {
        /// Map file or `catalog:<name>:<n>[:params]`.
        map: String,
    },
    /// Affine hull dimension of the image.
    Hull {
        /// Map file or `catalog:<name>:<n>[:params]`.
        map: String,
    },
    /// Geometric rank over seeded boundary points.
    Rank {
        /// Map file or `catalog:<name>:<n>[:params]`.
        map: String,
        /// Number of seeded boundary points.
        #[arg(long, default_value_t = 25)]
        points: usize,
    },
    /// Normal form at a boundary point.
    Normalize {
        /// Map file or `catalog:<name>:<n>[:params]`.
        map: String,
        /// Boundary point `z1,...,z_{n-1};u` (Siegel coordinates) or `origin`.
        #[arg(long)]
        at: Option<String>,
        /// Weighted jet order.
        #[arg(long, default_value_t = 5)]
        order: usize,
    },
    /// Identity battery on the normal form at a boundary point.
    Identities {
        /// Map file or `catalog:<name>:<n>[:params]`.
        map: String,
        /// Boundary point `z1,...,z_{n-1};u` (Siegel coordinates) or `origin`.
        #[arg(long)]
        at: Option<String>,
        /// Which identities: s3, s4 or all.
        #[arg(long, default_value = "all")]
        battery: String,
        /// Weighted jet order.
        #[arg(long, default_value_t = 7)]
        order: usize,
    },
    /// Tangential jet spans at a boundary point.
    Span {
        /// Map file or `catalog:<name>:<n>[:params]`.
        map: String,
        /// Boundary point `z1,...,z_{n-1};u` (Siegel coordinates) or `origin`.
        #[arg(long)]
        at: Option<String>,
        /// Weighted jet order.
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Gap intervals for source dimension n.
    Gaps {
        n: usize,
        /// Also classify this target dimension.
        #[arg(long)]
        target: Option<usize>,
    },
    /// Exact search for proper monomial maps.
    MonomialSearch {
        /// Source dimension.
        #[arg(value_name = "n")]
        n: usize,
        /// Target dimension.
        #[arg(name = "N", value_name = "N")]
        big_n: usize,
        /// Largest monomial degree.
        #[arg(long)]
        degree: usize,
        /// File with one monomial per line, e.g. `z1*z2^2`.
        #[arg(long, conflicts_with_all = ["pattern", "exhaustive"])]
        support: Option<String>,
        /// Support of a known family: whitney, dangelo or example11.
        #[arg(long, conflicts_with = "exhaustive")]
        pattern: Option<String>,
        /// Enumerate vertex solutions over all monomials (n ≤ 3, degree ≤ 3).
        #[arg(long)]
        exhaustive: bool,
    },
    /// List the built-in maps, optionally re-deriving their facts.
    Catalog {
        /// Recompute every stored fact and report differences.
        #[arg(long)]
        self_check: bool,
        /// Boundary points used for each rank during the self-check.
        #[arg(long, default_value_t = 3)]
        points: usize,
    },
    /// Rewrite a map in the other model (Cayley transform).
    Transport {
        /// Map file or `catalog:<name>:<n>[:params]`.
        map: String,
        /// Target model: ball or siegel.
        #[arg(long)]
        to: String,
    },
}

enum Fail {
    Usage(String),
    Unsolvable(String),
    Other(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Dimension(_) => Fail::Usage(e.to_string()),
            Error::ExactUnsolvable(_) => Fail::Unsolvable(e.to_string()),
            _ => Fail::Other(e.to_string()),
        }
    }
}

/// A finished check: its JSON report, the table rendering, and the verdict.
struct Outcome {
    json: Value,
    text: String,
    ok: bool,
}

type Run = Result<Outcome, Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable report"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Unsolvable(m)) => {
            eprintln!("error: {m}\nhint: retry with --mode float");
            ExitCode::from(3)
        }
        Err(Fail::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

/// `catalog:<name>:<n>[:p1[:p2]]` or a path to a map file.
fn load_map(spec: &str) -> Result<RationalMap<Q>, Fail> {
    if let Some(rest) = spec.strip_prefix("catalog:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let n = parts
            .get(1)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Fail::Usage(format!("`{spec}`: expected catalog:<name>:<n>")))?;
        let params = parts[2..].iter().map(|p| p.parse::<Q>()).collect::<Result<Vec<_>, _>>()?;
        return Ok(catalog::build(parts[0], n, &params)?);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Fail::Usage(format!("{spec}: {e}")))?;
    Ok(RationalMap::parse_file(&text)?)
}

/// `z1,z2,…;u` names the boundary point `(z, u + i|z|²)`; `origin` is 0.
/// Without `--at`, the first seeded sample point is used.
fn boundary(at: Option<&str>, n: usize, seed: u64) -> Result<(Vec<Q>, Q), Fail> {
    match at {
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(sample_boundary_points(n, 1, &mut rng).remove(0))
        }
        Some("origin") => Ok((vec![Q::from_i64(0); n - 1], Q::from_i64(0))),
        Some(s) => {
            let (zs, u) = s.split_once(';').ok_or_else(|| Fail::Usage(format!("point `{s}`: expected z1,…;u")))?;
            let z: Vec<Q> = zs.split(',').map(|t| t.parse::<Q>()).collect::<Result<_, _>>()?;
            if z.len() != n - 1 {
                return Err(Fail::Usage(format!("point has {} z-coordinates, expected {}", z.len(), n - 1)));
            }
            Ok(boundary_point(&z, &u.parse::<Q>()?))
        }
    }
}

fn to_float(f: &RationalMap<Q>) -> RationalMap<Complex64> {
    f.convert(Complex64::from_gaussian)
}

fn run(cli: &Cli) -> Run {
    let tol = cli.tolerance;
    match &cli.cmd {
        Cmd::VerifyProper { map } => {
            let f = load_map(map)?;
            match cli.mode {
                Mode::Exact => verify_proper(&f, 0.0),
                Mode::Float => verify_proper(&to_float(&f), tol),
            }
        }
        Cmd::Hull { map } => {
            let f = load_map(map)?;
            let (hull, span) = match cli.mode {
                Mode::Exact => (f.affine_hull_dim(0.0), f.linear_span_dim(0.0)),
                Mode::Float => {
                    let g = to_float(&f);
                    (g.affine_hull_dim(tol), g.linear_span_dim(tol))
                }
            };
            let reducible = hull < f.target_dim;
            Ok(Outcome {
                json: json!({"n": f.n, "N": f.target_dim, "affine_hull": hull, "linear_span": span, "of_form_G_0": reducible}),
                text: format!(
                    "n = {}, N = {}\naffine hull = {hull}\nlinear span = {span}\n{}\n",
                    f.n,
                    f.target_dim,
                    if reducible { "equivalent to a map of the form (G, 0')" } else { "hull fills the target" }
                ),
                ok: true,
            })
        }
        Cmd::Rank { map, points } => {
            let f = load_map(map)?;
            let r = match cli.mode {
                Mode::Exact => geometric_rank(&f, *points, cli.seed, 0.0)?,
                Mode::Float => geometric_rank(&to_float(&f), *points, cli.seed, tol)?,
            };
            let mut text = format!("geometric rank = {} ({} over {} points)\n", r.rank, if r.constant { "constant" } else { "varying" }, points);
            for s in &r.samples {
                let shown = s.rank.map_or_else(|| s.note.clone().unwrap_or_default(), |k| k.to_string());
                let _ = writeln!(text, "  {:>4}  {}", shown, s.point);
            }
            Ok(Outcome { json: serde_json::to_value(&r).expect("report"), text, ok: true })
        }
        Cmd::Normalize { map, at, order } => {
            let f = load_map(map)?;
            let (z0, w0) = boundary(at.as_deref(), f.n, cli.seed)?;
            match cli.mode {
                Mode::Exact => normalize_exact(&f, &z0, &w0, *order),
                Mode::Float => normalize_float(&f, &z0, &w0, *order, tol),
            }
        }
        Cmd::Identities { map, at, battery, order } => {
            if !["s3", "s4", "all"].contains(&battery.as_str()) {
                return Err(Fail::Usage(format!("unknown battery `{battery}`")));
            }
            if cli.mode == Mode::Exact {
                return Err(Fail::Unsolvable(
                    "the rank-adapted normal form is computed in float (its source shift is not rational in general)".into(),
                ));
            }
            let f = load_map(map)?;
            let (z0, w0) = boundary(at.as_deref(), f.n, cli.seed)?;
            identities(&f, &z0, &w0, battery, *order, tol)
        }
        Cmd::Span { map, at, order } => {
            let f = load_map(map)?;
            let (z0, w0) = boundary(at.as_deref(), f.n, cli.seed)?;
            let s = siegel_form(&f)?;
            let r = match cli.mode {
                Mode::Exact => jet_span(&s, &z0, &w0, *order)?,
                Mode::Float => {
                    let c: Vec<Complex64> = z0.iter().map(Complex64::from_gaussian).collect();
                    jet_span(&to_float(&s), &c, &Complex64::from_gaussian(&w0), *order)?
                }
            };
            let mut text = String::from("  k  dim span{L^b F|0 : |b| <= k}\n");
            for (k, d) in r.dims.iter().enumerate() {
                let _ = writeln!(text, "{:>3}  {d}", k + 1);
            }
            if let Some(k) = r.stabilization {
                let _ = writeln!(text, "stabilizes at k = {k}");
            }
            Ok(Outcome { json: serde_json::to_value(&r).expect("report"), text, ok: true })
        }
        Cmd::Gaps { n, target } => {
            if *n < 2 {
                return Err(Fail::Usage("gaps needs n ≥ 2".into()));
            }
            let p = gap_profile(*n);
            let mut text = format!("n = {n}, K = {}\n  k      lo      hi\n", p.k);
            for i in &p.intervals {
                if i.empty {
                    let _ = writeln!(text, "{:>3}   empty", i.k);
                } else {
                    let _ = writeln!(text, "{:>3}  {:>6}  {:>6}", i.k, i.lo, i.hi);
                }
            }
            let mut j = serde_json::to_value(&p).expect("profile");
            if let Some(nn) = target {
                let (g, t) = (in_gap(*n, *nn), thm11_applies(*n, *nn));
                let _ = writeln!(text, "N = {nn}: in gap = {g}, third-gap theorem applies = {t}");
                j["target"] = json!({"N": nn, "in_gap": g, "thm11_applies": t});
            }
            Ok(Outcome { json: j, text, ok: true })
        }
        Cmd::MonomialSearch { n, big_n, degree, support, pattern, exhaustive } => {
            monomial_search(*n, *big_n, *degree, support.as_deref(), pattern.as_deref(), *exhaustive)
        }
        Cmd::Catalog { self_check: check, points } => {
            let entries = catalog::catalog();
            if *check {
                let r = self_check(&entries, *points, cli.seed);
                let mut text = String::new();
                for e in &r.entries {
                    let _ = writeln!(text, "{:<28} {}", e.name, if e.diffs.is_empty() { "ok" } else { "MISMATCH" });
                    for d in &e.diffs {
                        let _ = writeln!(text, "    {}: expected {} found {}", d.field, d.expected, d.found);
                    }
                }
                return Ok(Outcome { json: serde_json::to_value(&r).expect("report"), ok: r.ok, text });
            }
            let mut text = String::from("name                          n    N  deg  rank  hull\n");
            let mut rows = Vec::new();
            for e in &entries {
                let x = &e.expected;
                let rank = x.geometric_rank.map_or("-".into(), |r| r.to_string());
                let _ = writeln!(text, "{:<28} {:>3} {:>4} {:>4} {:>5} {:>5}", e.name, e.map.n, e.map.target_dim, x.degree, rank, x.affine_hull);
                rows.push(json!({"name": e.name, "n": e.map.n, "N": e.map.target_dim, "expected": x, "map": e.map.to_string()}));
            }
            Ok(Outcome { json: Value::Array(rows), text, ok: true })
        }
        Cmd::Transport { map, to } => {
            let f = load_map(map)?;
            let target: Model = to.parse()?;
            let g = if f.model == target { f } else { f.conjugate_model()? };
            Ok(Outcome { json: json!({"map": g.to_string()}), text: g.to_string(), ok: true })
        }
    }
}

fn verify_proper<S: Scalar>(f: &RationalMap<S>, tol: f64) -> Run {
    let v = f.is_proper(tol);
    let cert = v.certificate.as_ref().map(|c| c.to_string());
    let witness = v.witness.as_ref().map(|w| w.prune(tol).to_string());
    let mut text = format!("proper: {}\n", v.proper);
    if let Some(c) = &cert {
        let _ = writeln!(text, "certificate quotient: {c}");
    }
    if let Some(w) = &witness {
        let _ = writeln!(text, "witness remainder: {w}");
    }
    Ok(Outcome { json: json!({"proper": v.proper, "certificate": cert, "witness": witness}), text, ok: v.proper })
}

fn normalize_exact(f: &RationalMap<Q>, z0: &[Q], w0: &Q, order: usize) -> Run {
    let norm = normalize_lemma21(f, z0, w0, order, 0.0)?;
    let rank = rank_of_a(&norm.matrix_a(), 0.0);
    let compat = norm.compatibility_residual();
    let mut clauses: Vec<Value> = norm
        .shape_residuals()
        .iter()
        .map(|(name, r)| json!({"clause": name, "passed": r.is_zero(), "terms": r.len(), "residual": r.to_string()}))
        .collect();
    clauses.push(json!({"clause": "compatibility", "passed": compat.is_zero(), "terms": compat.len(), "residual": compat.to_string()}));
    let ok = clauses.iter().all(|c| c["passed"] == json!(true));
    let mut text = format!("normal form through weighted order {order} (exact)\ngeometric rank at p = {rank}\n");
    for c in &clauses {
        let _ = writeln!(text, "  {:<32} {}", c["clause"].as_str().unwrap_or(""), if c["passed"] == json!(true) { "ok" } else { "FAIL" });
    }
    let jet: Vec<String> = norm.jet.comps.iter().map(HoloPoly::to_string).collect();
    Ok(Outcome { json: json!({"mode": "exact", "order": order, "rank": rank, "clauses": clauses, "jet": jet}), text, ok })
}

fn float_point(z0: &[Q], w0: &Q) -> (Vec<Complex64>, Complex64) {
    (z0.iter().map(Complex64::from_gaussian).collect(), Complex64::from_gaussian(w0))
}

fn normalize_float(f: &RationalMap<Q>, z0: &[Q], w0: &Q, order: usize, tol: f64) -> Run {
    let (cz, cw) = float_point(z0, w0);
    let r = normalize_thm21(&to_float(f), &cz, &cw, order, tol)?;
    let nj = &r.normalized;
    let scale = nj.jet.comps.iter().fold(1.0f64, |m, p| m.max(p.max_abs_coeff()));
    let clauses = summarize(&thm21_clauses(nj), tol * scale);
    let ok = clauses.iter().all(|c| c.passed);
    let mu: Vec<f64> = nj.mu.iter().map(|m| m.re).collect();
    let mut text = format!("rank-adapted normal form through weighted order {order} (float)\nkappa0 = {}\nmu = {mu:?}\n", nj.kappa0);
    for c in &clauses {
        let _ = writeln!(text, "  {:<32} {}  max {:.3e}", c.clause, if c.passed { "ok" } else { "FAIL" }, c.max_coeff);
    }
    let jet: Vec<String> = nj.jet.comps.iter().map(|p| p.prune(tol * scale).to_string()).collect();
    Ok(Outcome {
        json: json!({"mode": "float", "order": order, "kappa0": nj.kappa0, "mu": mu, "clauses": clauses, "jet": jet,
                     "solve_residual": r.solve_residual}),
        text,
        ok,
    })
}

fn identities(f: &RationalMap<Q>, z0: &[Q], w0: &Q, battery: &str, order: usize, tol: f64) -> Run {
    let (cz, cw) = float_point(z0, w0);
    let r = normalize_thm21(&to_float(f), &cz, &cw, order, tol)?;
    let keep = |id: &str| match battery {
        "s3" => id.starts_with('3') || id.starts_with('L'),
        "s4" => id.starts_with('4') || id.starts_with('T'),
        _ => true,
    };
    let reports: Vec<_> = verify_identity_battery(&r.normalized, tol).into_iter().filter(|x| keep(x.id)).collect();
    let ok = reports.iter().all(|x| x.status != Status::Failed);
    let mut text = format!("kappa0 = {}\n  id          status    terms   max residual\n", r.normalized.kappa0);
    let mut rows = Vec::new();
    for x in &reports {
        let status = match &x.status {
            Status::Passed => "passed".to_string(),
            Status::Failed => "FAILED".to_string(),
            Status::Skipped(why) => format!("skipped ({why})"),
        };
        let _ = writeln!(text, "  {:<10}  {:<8}  {:>5}   {:.3e}", x.id, status, x.residual.len(), x.max_residual);
        rows.push(json!({"id": x.id, "status": status, "residual_terms": x.residual.len(), "max_residual": x.max_residual}));
    }
    Ok(Outcome { json: json!({"kappa0": r.normalized.kappa0, "identities": rows}), text, ok })
}

fn monomial_search(n: usize, big_n: usize, d: usize, support: Option<&str>, pattern: Option<&str>, exhaustive: bool) -> Run {
    if exhaustive {
        let sols = monomial::exhaustive_search(n, big_n, d)?;
        let mut text = format!("{} vertex solutions with at most {big_n} components\n", sols.len());
        for s in &sols {
            let terms: Vec<String> = s
                .support
                .iter()
                .zip(&s.x)
                .filter(|(_, x)| !num_traits::Zero::is_zero(*x))
                .map(|(a, x)| format!("{x}*{}", mono_name(a)))
                .collect();
            let _ = writeln!(text, "  hull {:>2}: {}", s.hull_dim, terms.join(" + "));
        }
        let ok = !sols.is_empty();
        return Ok(Outcome { json: serde_json::to_value(&sols).expect("solutions"), text, ok });
    }
    let sup = match (support, pattern) {
        (Some(path), _) => read_support(path, n)?,
        (None, Some(p)) => monomial::pattern_support(p.parse::<Pattern>()?, n)?,
        (None, None) => monomial::all_monomials(n, d),
    };
    let r: FeasibilityReport = monomial::monomial_feasibility(n, big_n, d, &sup)?;
    let mut text = format!("feasible: {}\n", r.feasible);
    if let Some(fd) = r.family_dim {
        let _ = writeln!(text, "family dimension: {fd}");
    }
    if let Some(s) = &r.solution {
        for (a, x) in s.support.iter().zip(&s.x) {
            let _ = writeln!(text, "  |c|^2 = {:<12} {}", x.to_string(), mono_name(a));
        }
        let _ = writeln!(text, "hull = {} of N = {big_n}{}", s.hull_dim, if r.full_hull { " (not of the form (G, 0'))" } else { "" });
        let _ = writeln!(text, "proper: {}", s.verify_proper());
    }
    Ok(Outcome { json: serde_json::to_value(&r).expect("report"), ok: r.feasible, text })
}

fn mono_name(a: &[u8]) -> String {
    let parts: Vec<String> = a
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("z{}", i + 1) } else { format!("z{}^{e}", i + 1) })
        .collect();
    parts.join("*")
}

fn read_support(path: &str, n: usize) -> Result<Vec<Vec<u8>>, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{path}: {e}")))?;
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let p = HoloPoly::<Q>::parse(line, n)?;
        let (e, _) = p
            .terms()
            .next()
            .filter(|_| p.len() == 1)
            .ok_or_else(|| Fail::Usage(format!("`{line}` is not a single monomial")))?;
        out.push(e.0[..n].to_vec());
    }
    Ok(out)
}
