use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use pgfr::classify::{classify_cycle, classify_path, crosscheck, ClassificationRule, PathRules};
use pgfr::cospectrality::{revival_target, strong_fractional_cospectrality, Group};
use pgfr::decide::decide_pair;
use pgfr::dynamics::{phase_fit, phase_gap, scan, search_revival, PairPropagator, SearchOutcome, SearchParams};
use pgfr::spectra::{spectrum, Eigenvalue, SpectralDecomposition};
use pgfr::walks::{pair_series, path_walk_closed_form, walk_cospectrality_detail, WalkVerdict};
use pgfr::{Error, Family, Graph, GraphSpec};

/// Pretty good fractional revival in continuous-time quantum walks.
///
/// Vertex labels are 1-based on paths and 0-based on cycles and matrix files.
/// Exit status: 0 = PGFR (or success), 1 = no PGFR (or a failed check),
/// 2 = error.
#[derive(Parser)]
#[command(name = "pgfr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues with multiplicities.
    Spectrum {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        json: bool,
    },
    /// Walk counts A^k(u,u), A^k(v,v), A^k(u,v) as CSV.
    Walks {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        kmax: usize,
        /// Add the reflection-formula counts (paths only).
        #[arg(long)]
        closed_form: bool,
        #[arg(long)]
        json: bool,
    },
    /// Fractional cospectrality of a pair: constant c and eigenvalue grouping.
    Cospectral {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        json: bool,
    },
    /// Exact PGFR decision for a pair.
    Pgfr {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        json: bool,
    },
    /// Closed-form verdict for paths and cycles.
    Classify {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long, requires = "v", conflicts_with = "all_pairs", allow_negative_numbers = true)]
        u: Option<i64>,
        #[arg(long, requires = "u", allow_negative_numbers = true)]
        v: Option<i64>,
        #[arg(long)]
        all_pairs: bool,
        /// Closed form for symmetric path pairs.
        #[arg(long, default_value = "published")]
        rules: RulesArg,
        #[arg(long)]
        json: bool,
    },
    /// Search for a time of small leakage.
    Simulate {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 1e3)]
        t_max: f64,
        #[arg(long, default_value_t = 0.01)]
        grid: f64,
        /// Minimum |U(u,v)| for a candidate time.
        #[arg(long, default_value_t = 0.05)]
        theta: f64,
        /// Write the coarse scan (t, leakage, transfer, |U_uu|) here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Compare the closed forms with the exact decision on every pair.
    Crosscheck {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value = "published")]
        rules: RulesArg,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct GraphArg {
    /// path:N, cycle:N or file:PATH (whitespace-separated dense matrix).
    #[arg(long, value_parser = parse_graph_spec)]
    graph: GraphSpec,
}

#[derive(Args)]
struct PairArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, allow_negative_numbers = true)]
    u: i64,
    #[arg(long, allow_negative_numbers = true)]
    v: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Path,
    Cycle,
}

#[derive(Clone, Copy, ValueEnum)]
enum RulesArg {
    Published,
    Observed,
}

impl From<RulesArg> for PathRules {
    fn from(r: RulesArg) -> Self {
        match r {
            RulesArg::Published => PathRules::Published,
            RulesArg::Observed => PathRules::Observed,
        }
    }
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Path => Family::Path,
            FamilyArg::Cycle => Family::Cycle,
        }
    }
}

fn parse_graph_spec(s: &str) -> Result<GraphSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Shortest decimal with 15 significant digits, like C's `%.15g`.
fn sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..15).contains(&exp) {
        trim(&format!("{x:.*}", (14 - exp) as usize))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

struct Loaded {
    graph: Graph,
    spec: SpectralDecomposition,
    u: usize,
    v: usize,
}

fn load_pair(p: &PairArgs) -> Result<Loaded, Error> {
    let graph = p.graph.graph.build()?;
    let u = graph.index_of(p.u)?;
    let v = graph.index_of(p.v)?;
    if u == v {
        return Err(Error::InvalidPair(format!("u and v must differ (got {} twice)", p.u)));
    }
    let spec = spectrum(&graph);
    Ok(Loaded { graph, spec, u, v })
}

fn print_json(value: &impl Serialize) -> Result<(), Error> {
    let out = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    println!("{out}");
    Ok(())
}

fn eigen_label(spec: &SpectralDecomposition, k: usize) -> i64 {
    spec.eigenspaces()[k].label.unwrap_or(k as i64)
}

fn grouping_json(spec: &SpectralDecomposition, grouping: &[Group]) -> Value {
    let pick = |f: fn(Group) -> bool| -> Vec<i64> {
        (0..spec.len()).filter(|&k| f(grouping[k])).map(|k| eigen_label(spec, k)).collect()
    };
    json!({
        "pi1": pick(Group::in_pi1),
        "pi2": pick(Group::in_pi2),
        "zero": pick(|g| g == Group::Zero),
    })
}

fn grouping_text(spec: &SpectralDecomposition, grouping: &[Group]) -> String {
    let list = |f: fn(Group) -> bool| -> String {
        let v: Vec<String> =
            (0..spec.len()).filter(|&k| f(grouping[k])).map(|k| eigen_label(spec, k).to_string()).collect();
        format!("{{{}}}", v.join(", "))
    };
    format!(
        "Pi1 = {}\nPi2 = {}\nZ   = {}",
        list(Group::in_pi1),
        list(Group::in_pi2),
        list(|g| g == Group::Zero)
    )
}

fn cmd_spectrum(graph: &GraphArg, as_json: bool) -> Result<ExitCode, Error> {
    let g = graph.graph.build()?;
    let spec = spectrum(&g);
    let rows: Vec<Value> = spec
        .eigenspaces()
        .iter()
        .map(|e| {
            let exact = match e.value {
                Eigenvalue::Exact(c) => Some(c.to_string()),
                Eigenvalue::Float { .. } => None,
            };
            json!({"label": e.label, "exact": exact, "value": e.numeric(), "multiplicity": e.multiplicity})
        })
        .collect();
    if as_json {
        print_json(&json!({"graph": graph.graph.to_string(), "exact": spec.is_exact(), "eigenvalues": rows}))?;
    } else {
        println!("{:>6}  {:<22}  {:>22}  mult", "j", "exact", "value");
        for e in spec.eigenspaces() {
            let exact = e.value.exact().map(|c| c.to_string()).unwrap_or_else(|| "-".into());
            let label = e.label.map(|l| l.to_string()).unwrap_or_else(|| "-".into());
            println!("{label:>6}  {exact:<22}  {:>22}  {}", sig15(e.numeric()), e.multiplicity);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_walks(p: &PairArgs, kmax: usize, closed: bool, as_json: bool) -> Result<ExitCode, Error> {
    let l = load_pair(p)?;
    if closed && l.graph.family() != Family::Path {
        return Err(Error::InvalidArgument("--closed-form applies to path graphs only".into()));
    }
    let series = pair_series(&l.graph, l.u, l.v, kmax)?;
    let n = l.graph.n() as u64;
    let cf = |x: usize, y: usize, k: usize| -> Option<BigInt> {
        closed.then(|| path_walk_closed_form(n, x as u64 + 1, y as u64 + 1, k as u64)).flatten()
    };
    if as_json {
        let rows: Vec<Value> = series
            .iter()
            .enumerate()
            .map(|(k, (uu, vv, uv))| {
                let mut row = json!({"k": k, "uu": uu.to_string(), "vv": vv.to_string(), "uv": uv.to_string()});
                if closed {
                    let s = |x: Option<BigInt>| x.map(|b| b.to_string());
                    row["closed_uu"] = json!(s(cf(l.u, l.u, k)));
                    row["closed_vv"] = json!(s(cf(l.v, l.v, k)));
                    row["closed_uv"] = json!(s(cf(l.u, l.v, k)));
                }
                row
            })
            .collect();
        print_json(&json!({"graph": p.graph.graph.to_string(), "u": p.u, "v": p.v, "rows": rows}))?;
        return Ok(ExitCode::SUCCESS);
    }
    let mut out = String::from("k,A^k(u,u),A^k(v,v),A^k(u,v)");
    if closed {
        out.push_str(",closed(u,u),closed(v,v),closed(u,v)");
    }
    out.push('\n');
    for (k, (uu, vv, uv)) in series.iter().enumerate() {
        write!(out, "{k},{uu},{vv},{uv}").unwrap();
        if closed {
            for (x, y) in [(l.u, l.u), (l.v, l.v), (l.u, l.v)] {
                out.push(',');
                if let Some(c) = cf(x, y, k) {
                    write!(out, "{c}").unwrap();
                }
            }
        }
        out.push('\n');
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_cospectral(p: &PairArgs, as_json: bool) -> Result<ExitCode, Error> {
    let l = load_pair(p)?;
    let outcome = strong_fractional_cospectrality(&l.spec, l.u, l.v);
    let walk = match l.graph.integer_weights() {
        Ok(_) => Some(walk_cospectrality_detail(&l.graph, l.u, l.v)?),
        Err(_) => None,
    };
    let walk_c = match &walk {
        Some(WalkVerdict::Constant(c)) => Some(c.to_string()),
        _ => None,
    };
    if as_json {
        let mut rec = json!({
            "graph": p.graph.graph.to_string(),
            "u": p.u,
            "v": p.v,
            "status": outcome.status(),
            "walk_constant": walk_c,
        });
        if let Some(cert) = outcome.certificate() {
            rec["c"] = json!(cert.c);
            rec["direction1"] = json!(cert.direction1);
            rec["direction2"] = json!(cert.direction2);
            rec["grouping"] = grouping_json(&l.spec, &cert.grouping);
        }
        if let pgfr::CospectralityOutcome::NotCospectral(why) = &outcome {
            rec["reason"] = serde_json::to_value(why).unwrap();
        }
        print_json(&rec)?;
    } else {
        println!("status: {}", outcome.status());
        if let Some(cert) = outcome.certificate() {
            println!("c = {}", sig15(cert.c));
            println!("direction (p, q) = ({}, {})", sig15(cert.direction1[0]), sig15(cert.direction1[1]));
            println!("{}", grouping_text(&l.spec, &cert.grouping));
        }
        if let pgfr::CospectralityOutcome::NotCospectral(why) = &outcome {
            println!("reason: {why:?}");
        }
        match (&walk, walk_c) {
            (_, Some(c)) => println!("walk constant: {c}"),
            (Some(w), None) => println!("walk constant: none ({w:?})"),
            (None, None) => println!("walk constant: n/a (non-integer weights)"),
        }
    }
    Ok(if outcome.certificate().is_some() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_pgfr(p: &PairArgs, as_json: bool) -> Result<ExitCode, Error> {
    let l = load_pair(p)?;
    let verdict = decide_pair(&l.spec, l.u, l.v)?;
    let outcome = strong_fractional_cospectrality(&l.spec, l.u, l.v);
    let witness: Option<Vec<String>> = verdict
        .witness
        .as_ref()
        .map(|w| w.iter().map(|t| format!("{}:{}", t.label, t.coefficient)).collect());
    if as_json {
        let mut rec = serde_json::to_value(&verdict).unwrap();
        rec["graph"] = json!(p.graph.graph.to_string());
        rec["u"] = json!(p.u);
        rec["v"] = json!(p.v);
        if let Some(w) = &witness {
            rec["witness_pairs"] = json!(w);
        }
        if let Some(cert) = outcome.certificate() {
            rec["grouping"] = grouping_json(&l.spec, &cert.grouping);
        }
        print_json(&rec)?;
    } else {
        println!("verdict: {}", verdict.status);
        if let Some(q) = &verdict.proj_gcd {
            println!("proj_gcd: {q}");
        }
        if let Some(w) = &witness {
            println!("witness: {}", w.join(" "));
        }
        if let Some(cert) = outcome.certificate() {
            println!("{}", grouping_text(&l.spec, &cert.grouping));
        }
    }
    Ok(if verdict.status.is_pgfr() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn classify_one(family: Family, n: usize, u: i64, v: i64, rules: PathRules) -> Result<ClassificationRule, Error> {
    let to_usize = |x: i64| -> Result<usize, Error> {
        usize::try_from(x).map_err(|_| Error::VertexOutOfRange {
            vertex: x,
            n,
            convention: family.convention(),
        })
    };
    match family {
        Family::Path => classify_path(n, to_usize(u)?, to_usize(v)?, rules),
        _ => classify_cycle(n, to_usize(u)?, to_usize(v)?),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_classify(
    family: Family,
    n: usize,
    u: Option<i64>,
    v: Option<i64>,
    all_pairs: bool,
    rules: PathRules,
    as_json: bool,
) -> Result<ExitCode, Error> {
    let min_n = if family == Family::Path { 1 } else { 3 };
    if n < min_n {
        return Err(Error::InvalidGraph(format!("{family:?} needs at least {min_n} vertices")));
    }
    let verdict_text = |r: &ClassificationRule| if r.pgfr { "PGFR" } else { "no PGFR" };
    if let (Some(u), Some(v)) = (u, v) {
        let r = classify_one(family, n, u, v, rules)?;
        if as_json {
            print_json(&r)?;
        } else {
            println!("{} ({})", verdict_text(&r), r.rule_id);
        }
        return Ok(if r.pgfr { ExitCode::SUCCESS } else { ExitCode::from(1) });
    }
    if !all_pairs {
        return Err(Error::InvalidArgument("give --u and --v, or --all-pairs".into()));
    }
    let base = family.first_label();
    let mut all = Vec::new();
    for a in 0..n as i64 {
        for b in (a + 1)..n as i64 {
            all.push(classify_one(family, n, a + base, b + base, rules)?);
        }
    }
    let hits: Vec<&ClassificationRule> = all.iter().filter(|r| r.pgfr).collect();
    if as_json {
        print_json(&all)?;
    } else {
        println!("{} of {} pairs PGFR ({} labels)", hits.len(), all.len(), family.convention());
        for r in &hits {
            println!("({}, {})  {}", r.pair.0, r.pair.1, r.rule_id);
        }
    }
    Ok(if hits.is_empty() { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    p: &PairArgs,
    t_max: f64,
    grid: f64,
    theta: f64,
    csv: Option<&PathBuf>,
    as_json: bool,
) -> Result<ExitCode, Error> {
    if !(t_max > 0.0 && grid > 0.0) {
        return Err(Error::InvalidArgument("--t-max and --grid must be positive".into()));
    }
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::InvalidArgument("--theta must lie in [0, 1)".into()));
    }
    let l = load_pair(p)?;
    let params = SearchParams { t_max, grid_step: grid, transfer_floor: theta, ..SearchParams::default() };
    let outcome = search_revival(&l.spec, l.u, l.v, &params);
    if let Some(path) = csv {
        let prop = PairPropagator::new(&l.spec, l.u, l.v);
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "t,leakage,transfer,|U_uu|")?;
        for s in scan(&prop, t_max, grid) {
            writeln!(w, "{},{},{},{}", sig15(s.t), sig15(s.leakage), sig15(s.transfer), sig15(s.stay))?;
        }
        w.flush()?;
    }
    let cert = strong_fractional_cospectrality(&l.spec, l.u, l.v).certificate().cloned();
    let fit = match (&outcome, &cert) {
        (SearchOutcome::Found(r), Some(c)) => Some(phase_fit(&l.spec, c, r.t_best)),
        _ => None,
    };
    if as_json {
        let mut rec = serde_json::to_value(outcome).unwrap();
        if let Some(r) = outcome.report() {
            let b = r.block;
            rec["block"] = json!([
                [[b[0][0].re, b[0][0].im], [b[0][1].re, b[0][1].im]],
                [[b[1][0].re, b[1][0].im], [b[1][1].re, b[1][1].im]],
            ]);
        }
        if let Some(f) = fit {
            rec["phase_fit"] = json!({"delta1": f.delta1, "delta2": f.delta2, "residual": f.residual, "gap": phase_gap(&f)});
        }
        if let Some(c) = &cert {
            rec["max_transfer"] = json!(revival_target(c).max_transfer());
        }
        rec["params"] = serde_json::to_value(params).unwrap();
        print_json(&rec)?;
    } else {
        match &outcome {
            SearchOutcome::Found(r) => {
                println!("t_best   = {}", sig15(r.t_best));
                println!("leakage  = {}  (grid {} at t = {})", sig15(r.leakage), sig15(r.coarse_leakage), sig15(r.coarse_t));
                println!("|U(u,v)| = {}", sig15(r.transfer));
                println!("|U(u,u)| = {}", sig15(r.stay));
                println!("candidates refined: {}", r.candidates);
                if let Some(f) = fit {
                    println!(
                        "phases: delta1 = {}, delta2 = {}, gap = {}, residual = {}",
                        sig15(f.delta1),
                        sig15(f.delta2),
                        sig15(phase_gap(&f)),
                        sig15(f.residual)
                    );
                }
            }
            SearchOutcome::NoCandidate { max_transfer } => {
                println!("no grid time reaches |U(u,v)| >= {theta} (max {})", sig15(*max_transfer));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_crosscheck(family: Family, n_max: usize, rules: PathRules, as_json: bool) -> Result<ExitCode, Error> {
    let report = crosscheck(family, n_max, rules)?;
    if as_json {
        print_json(&report)?;
    } else {
        println!(
            "{family:?} n <= {n_max}: {} pairs, {} PGFR by exact decision, {} mismatches",
            report.pairs_checked,
            report.pgfr_pairs,
            report.mismatches.len()
        );
        for m in &report.mismatches {
            println!("MISMATCH {m}");
        }
    }
    Ok(if report.is_clean() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Spectrum { graph, json } => cmd_spectrum(graph, *json),
        Command::Walks { pair, kmax, closed_form, json } => cmd_walks(pair, *kmax, *closed_form, *json),
        Command::Cospectral { pair, json } => cmd_cospectral(pair, *json),
        Command::Pgfr { pair, json } => cmd_pgfr(pair, *json),
        Command::Classify { family, n, u, v, all_pairs, rules, json } => {
            cmd_classify((*family).into(), *n, *u, *v, *all_pairs, (*rules).into(), *json)
        }
        Command::Simulate { pair, t_max, grid, theta, csv, json } => {
            cmd_simulate(pair, *t_max, *grid, *theta, csv.as_ref(), *json)
        }
        Command::Crosscheck { family, n_max, rules, json } => {
            cmd_crosscheck((*family).into(), *n_max, (*rules).into(), *json)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io::stderr(), "error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::sig15;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(sig15(0.0), "0");
        assert_eq!(sig15(1.0), "1");
        assert_eq!(sig15(-2.5), "-2.5");
        assert_eq!(sig15(std::f64::consts::PI), "3.14159265358979");
        assert_eq!(sig15(1234.5678), "1234.5678");
        assert_eq!(sig15(1e-7), "1e-7");
        assert_eq!(sig15(6.02214076e23), "6.02214076e23");
        assert_eq!(sig15(0.1 + 0.2), "0.3");
        assert_eq!(sig15(0.000123456789012345678), "0.000123456789012346");
    }
}
