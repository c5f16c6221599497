//! Command implementations. Each builds a [`Report`] holding the JSON value
//! and the equivalent CSV table.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use opendom_core::convergence::{CauchyReport, LimitCandidate};
use opendom_core::hyperspace::{d_fell_with_plan, fell_hit, fell_miss};
use opendom_core::metric::{beta_with_plan, d_gamma_with_plan, in_ball, in_compact_open, in_compact_open_inv};
use opendom_core::rational::to_decimal;
use opendom_core::suites::{corrupted_beta_term, run_all, SuiteConfig};
use opendom_core::{
    counterexample_gamma, format_rational, AmbientSpace, Enclosure, Error, GammaMap, PartialMap, Rational, Result,
    SequenceSpec, TruncationPlan,
};
use serde_json::{json, Value};

use crate::formats::{declared_space, load_closed_set, load_map, parse_compact, parse_open, FunctionDto};
use crate::{Cli, Command, ConvergeArgs, Format, GlobalArgs, Member};

const DECIMALS: usize = 12;

pub struct Report {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// False when the run found violations.
    pub ok: bool,
}

impl Report {
    fn new(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Report { json, header: header.iter().map(|s| s.to_string()).collect(), rows, ok: true }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("in-memory write");
                for row in &self.rows {
                    w.write_record(row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
            }
        }
    }
}

pub fn execute(cli: &Cli, stderr: &mut dyn Write) -> Result<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::Dist { f, g: other, gamma } => dist(g, f, other, *gamma),
        Command::FellDist { a, b } => fell_dist(g, a, b),
        Command::Member { predicate } => member(g, predicate),
        Command::Converge(args) => converge(g, args),
        Command::Counterexample { count } => counterexample(g, *count),
        Command::Axioms { corrupt_beta } => axioms(g, *corrupt_beta, stderr),
    }
}

fn plan(g: &GlobalArgs, tol: &Rational) -> Result<TruncationPlan> {
    let base = TruncationPlan::for_tolerance(tol)?;
    TruncationPlan::new(g.trunc_n.unwrap_or(base.n_cut), g.trunc_m.unwrap_or(base.m_cut))
}

fn enclosure_json(e: &Enclosure) -> Value {
    json!({
        "lo": format_rational(&e.lo),
        "hi": format_rational(&e.hi),
        "lo_decimal": to_decimal(&e.lo, DECIMALS),
        "hi_decimal": to_decimal(&e.hi, DECIMALS),
    })
}

fn enclosure_row(label: &str, e: &Enclosure) -> Vec<String> {
    vec![
        label.to_string(),
        format_rational(&e.lo),
        format_rational(&e.hi),
        to_decimal(&e.lo, DECIMALS),
        to_decimal(&e.hi, DECIMALS),
    ]
}

const ENCLOSURE_HEADER: [&str; 5] = ["metric", "lo", "hi", "lo_decimal", "hi_decimal"];

fn operand_space(g: &GlobalArgs, args: &[&str]) -> Option<AmbientSpace> {
    g.space.or_else(|| args.iter().find_map(|a| declared_space(a)))
}

fn dist(g: &GlobalArgs, f: &str, other: &str, gamma: bool) -> Result<Report> {
    let space = operand_space(g, &[f, other]);
    let (f, h) = (load_map(f, space)?, load_map(other, space)?);
    let (metric, e) = if gamma {
        let half = &g.tol / Rational::from_integer(2.into());
        let p = plan(g, &half)?;
        ("d_gamma", d_gamma_with_plan(&GammaMap::new(f)?, &GammaMap::new(h)?, &p).map(|e| (e, p))?)
    } else {
        let p = plan(g, &g.tol)?;
        ("beta", (beta_with_plan(&f, &h, &p)?, p))
    };
    let (e, p) = e;
    let mut body = enclosure_json(&e);
    body["command"] = json!("dist");
    body["metric"] = json!(metric);
    body["plan"] = json!({"n_cut": p.n_cut, "m_cut": p.m_cut});
    Ok(Report::new(body, &ENCLOSURE_HEADER, vec![enclosure_row(metric, &e)]))
}

fn fell_dist(g: &GlobalArgs, a: &str, b: &str) -> Result<Report> {
    let (a, b) = (load_closed_set(a, g.space)?, load_closed_set(b, g.space)?);
    let p = plan(g, &g.tol)?;
    let e = d_fell_with_plan(&a, &b, &p)?;
    let mut body = enclosure_json(&e);
    body["command"] = json!("fell-dist");
    body["metric"] = json!("d_fell");
    body["plan"] = json!({"n_cut": p.n_cut, "m_cut": p.m_cut});
    Ok(Report::new(body, &ENCLOSURE_HEADER, vec![enclosure_row("d_fell", &e)]))
}

fn member(g: &GlobalArgs, m: &Member) -> Result<Report> {
    let (name, result) = match m {
        Member::CompactOpen { map, compact, open } => {
            let f = load_map(map, operand_space(g, &[map]))?;
            let k = parse_compact(compact, f.space())?;
            let v = parse_open(open, f.codomain())?;
            ("compact-open", in_compact_open(&f, &k, &v)?)
        }
        Member::CompactOpenInv { map, compact, open } => {
            let f = GammaMap::new(load_map(map, operand_space(g, &[map]))?)?;
            let k = parse_compact(compact, f.space())?;
            let v = parse_open(open, f.space())?;
            ("compact-open-inv", in_compact_open_inv(&f, &k, &v)?)
        }
        Member::Hit { set, open } => {
            let a = load_closed_set(set, g.space)?;
            ("hit", fell_hit(&a, &parse_open(open, a.space())?)?)
        }
        Member::Miss { set, compact } => {
            let a = load_closed_set(set, g.space)?;
            ("miss", fell_miss(&a, &parse_compact(compact, a.space())?)?)
        }
        Member::Ball { map, center, compact, eps } => {
            let space = operand_space(g, &[map, center]);
            let (h, f) = (load_map(map, space)?, load_map(center, space)?);
            let k = parse_compact(compact, f.space())?;
            ("ball", in_ball(&h, &f, &k, eps)?)
        }
    };
    Ok(Report::new(
        json!({"command": "member", "predicate": name, "result": result}),
        &["predicate", "result"],
        vec![vec![name.to_string(), result.to_string()]],
    ))
}

fn parse_seq(g: &GlobalArgs, text: &str) -> Result<SequenceSpec> {
    SequenceSpec::parse_with(text, |name| load_map(name, operand_space(g, &[name])))
}

fn converge(g: &GlobalArgs, args: &ConvergeArgs) -> Result<Report> {
    let seq = parse_seq(g, &args.seq)?;
    let space = seq.space();
    let compacts =
        args.compacts.iter().map(|k| parse_compact(k, space)).collect::<Result<Vec<_>>>()?;
    if let Some(index) = args.limit_at {
        let k = compacts.first().ok_or_else(|| Error::Precondition("--limit-at needs --compact".into()))?;
        return Ok(limit_report(&opendom_core::limit_candidate(&seq, k, index, &args.mesh)?));
    }
    let report = if let Some(pair) = &args.inverse_check {
        let f = load_map(&pair[0], Some(space))?;
        let h = load_map(&pair[1], Some(space))?;
        let indices = if args.indices.is_empty() { (1..=16).collect() } else { args.indices.clone() };
        opendom_core::inverse_limit_check(&seq, &f, &h, &compacts, &indices, &g.tol)?
    } else if args.prefix.is_some() || !compacts.is_empty() || args.candidate.is_some() {
        let candidate = args.candidate.as_deref().map(|c| load_closed_set(c, Some(space))).transpose()?;
        opendom_core::gamma_cauchy_check(&seq, args.prefix.unwrap_or(16), &compacts, candidate.as_ref(), &g.tol)?
    } else {
        let target = match (&args.target, &seq.family) {
            (Some(t), _) => load_map(t, Some(space))?,
            (None, opendom_core::convergence::Family::Constant(f)) => f.clone(),
            (None, _) => PartialMap::empty(space, space),
        };
        let indices = if args.indices.is_empty() { vec![1, 2, 4, 8, 16, 32] } else { args.indices.clone() };
        opendom_core::beta_decay_report(&seq, &target, &indices, &g.tol)?
    };
    Ok(cauchy_report(&report))
}

fn opt(q: Option<&Rational>) -> String {
    q.map(format_rational).unwrap_or_default()
}

fn cauchy_report(r: &CauchyReport) -> Report {
    let mut header = vec!["index".to_string(), "lo".into(), "hi".into()];
    let mut columns: Vec<(usize, &'static str)> = Vec::new();
    for (i, k) in r.compacts.iter().enumerate() {
        for (name, present) in [
            ("spread", k.rows.iter().any(|row| row.spread.is_some())),
            ("forward", k.rows.iter().any(|row| row.forward.is_some())),
            ("backward", k.rows.iter().any(|row| row.backward.is_some())),
        ] {
            if present {
                columns.push((i, name));
                header.push(format!("k{}_{name}", i + 1));
            }
        }
    }
    header.push("verdict".into());
    let rows = r
        .indices
        .iter()
        .map(|&index| {
            let e = r.enclosures.iter().find(|e| e.index == index);
            let mut row = vec![
                index.to_string(),
                opt(e.map(|e| &e.enclosure.lo)),
                opt(e.map(|e| &e.enclosure.hi)),
            ];
            for &(i, name) in &columns {
                let cell = r.compacts[i].rows.iter().find(|row| row.index == index).and_then(|row| match name {
                    "spread" => row.spread.as_ref(),
                    "forward" => row.forward.as_ref(),
                    _ => row.backward.as_ref(),
                });
                row.push(opt(cell));
            }
            row.push(r.verdict.to_string());
            row
        })
        .collect();
    let json = serde_json::to_value(r).expect("reports serialize");
    Report { json, header, rows, ok: true }
}

fn limit_report(lc: &LimitCandidate) -> Report {
    let mut json = serde_json::to_value(lc).expect("reports serialize");
    json["map"] = serde_json::to_value(FunctionDto::from_map(&lc.map)).expect("maps serialize");
    Report::new(
        json,
        &["index", "slope_term", "tail_term", "bound"],
        vec![vec![lc.index.to_string(), format_rational(&lc.slope_term), opt(lc.tail_term.as_ref()), format_rational(&lc.bound)]],
    )
}

fn counterexample(g: &GlobalArgs, count: u64) -> Result<Report> {
    if count == 0 {
        return Err(Error::Precondition("--count must be positive".into()));
    }
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    let mut rows = Vec::new();
    for n in 1..=count {
        let f = counterexample_gamma(n);
        for (name, map) in [(format!("ce{n}.json"), f.base().clone()), (format!("ce{n}_inv.json"), f.inverse().into_base())] {
            let path = dir.join(&name);
            let text = serde_json::to_string_pretty(&FunctionDto::from_map(&map)).expect("maps serialize") + "\n";
            std::fs::write(&path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            rows.push(vec![n.to_string(), path.display().to_string()]);
        }
    }
    let files: Vec<&String> = rows.iter().map(|r| &r[1]).collect();
    Ok(Report::new(json!({"command": "counterexample", "count": count, "files": files}), &["index", "file"], rows))
}

fn axioms(g: &GlobalArgs, corrupt: bool, stderr: &mut dyn Write) -> Result<Report> {
    let mut cfg = SuiteConfig::new(g.samples, g.seed);
    if corrupt {
        cfg.beta_term = corrupted_beta_term;
    }
    let start = Instant::now();
    let outcomes = run_all(&cfg);
    let passed = outcomes.iter().all(|o| o.passed());
    let rows = outcomes
        .iter()
        .map(|o| {
            vec![
                o.name.to_string(),
                o.cases.to_string(),
                o.checks.to_string(),
                o.violations.to_string(),
                o.exhausted.to_string(),
                if o.passed() { "pass" } else { "fail" }.to_string(),
            ]
        })
        .collect();
    for o in &outcomes {
        let _ = writeln!(
            stderr,
            "{:<40} {} ({} checks, {} violations)",
            o.name,
            if o.passed() { "pass" } else { "FAIL" },
            o.checks,
            o.violations
        );
    }
    let _ = writeln!(stderr, "runtime: {:.1}s", start.elapsed().as_secs_f64());
    let json = json!({
        "command": "axioms",
        "seed": g.seed,
        "samples": g.samples,
        "corrupted_beta_table": corrupt,
        "suites": outcomes,
        "passed": passed,
    });
    let mut report = Report::new(json, &["suite", "cases", "checks", "violations", "exhausted", "status"], rows);
    report.ok = passed;
    Ok(report)
}
