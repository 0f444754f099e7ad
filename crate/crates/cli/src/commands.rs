use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use surfrig::linalg::ExactBackend;
use surfrig::presets::parse_surface;
use surfrig::rational::parse_q;
use surfrig::rigidity::{
    analyze_float, analyze_placement, trial_rng, Framework, RigidityReport, Strength,
};
use surfrig::sparsity::is_sparse;
use surfrig::{
    analyze, compute_type, generate, reduce, replay, AnalyzeOptions, Certificate, Error, Point3,
    SimpleGraph, Surface,
};

use crate::{Command, Expect, Output};

/// Runs a command; `Ok(true)` for an affirmative verdict.
pub fn run(cmd: Command) -> Result<bool, Error> {
    match cmd {
        Command::Check { graph, k, out } => check(&graph, k, &out),
        Command::Reduce {
            graph,
            k,
            replay_check,
            out,
        } => reduce_cmd(&graph, k, replay_check, &out),
        Command::Generate { n, k, seed, out } => generate_cmd(n, k, seed, &out),
        Command::Rigidity {
            graph,
            surface,
            trials,
            seed,
            k,
            placement,
            float,
            expect,
            out,
        } => {
            let graph = read_graph(&graph)?;
            let surface = parse_surface(&surface)?;
            let report = match placement {
                Some(path) => placed(&graph, &surface, &read_json(&path)?, k, float)?,
                None => {
                    let opts = AnalyzeOptions {
                        trials,
                        seed,
                        backend: if float { "float" } else { "exact" }.into(),
                        k,
                    };
                    analyze(&graph, &surface, &opts)?
                }
            };
            eprintln!(
                "{} on {}: rank {} of {} rows, nullity {}, {}{} ({})",
                describe(&graph),
                surface.name,
                report.rank,
                report.rows,
                report.nullity,
                if report.isostatic {
                    "isostatic"
                } else {
                    "not isostatic"
                },
                if report.independent {
                    ", independent"
                } else {
                    ", dependent"
                },
                strength_name(report.strength),
            );
            let ok = meets(&report, expect.unwrap_or(Expect::Isostatic), float);
            emit(&report, &out)?;
            Ok(ok)
        }
        Command::Type {
            surface,
            trials,
            seed,
            out,
        } => {
            let s = parse_surface(&surface)?;
            let k = compute_type(&s, trials, seed)?;
            let agrees = s.declared_type.is_none_or(|d| d == k);
            eprintln!(
                "{}: type {k} from {trials} placements per complete graph{}",
                s.name,
                match s.declared_type {
                    Some(d) if d != k => format!(", declared {d}"),
                    _ => String::new(),
                }
            );
            emit(
                &TypeReport {
                    surface: s.name.clone(),
                    k,
                    declared: s.declared_type,
                    strength: "evidence",
                    trials,
                    seed,
                },
                &out,
            )?;
            Ok(agrees)
        }
        Command::Verify {
            n,
            k,
            surface,
            trials,
            seed,
            expect,
            float,
            out,
        } => verify(n, k, &surface, trials, seed, expect, float, &out),
    }
}

fn strength_name(s: Strength) -> &'static str {
    match s {
        Strength::Certified => "certified",
        Strength::Evidence => "evidence",
    }
}

fn meets(report: &RigidityReport, expect: Expect, float: bool) -> bool {
    match expect {
        Expect::Isostatic => report.isostatic && (float || report.strength == Strength::Certified),
        Expect::Dependent => !report.independent,
    }
}

fn describe(g: &SimpleGraph) -> String {
    format!("graph ({} vertices, {} edges)", g.n(), g.m())
}

fn read_input(path: &Path) -> Result<String, Error> {
    let io_err = |e: io::Error| Error::Parse(format!("{}: {e}", path.display()));
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    serde_json::from_str(&read_input(path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A graph object, or any object holding one under `"graph"` (as printed by
/// `generate`).
fn read_graph(path: &Path) -> Result<SimpleGraph, Error> {
    let mut v = read_json(path)?;
    if let Some(inner) = v.get_mut("graph") {
        v = inner.take();
    }
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(value: &T, out: &Output) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    write_text(&text, out.out.as_ref())
}

fn write_text(text: &str, path: Option<&PathBuf>) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Parse(format!("stdout: {e}"))),
    }
}

fn check(path: &Path, k: u8, out: &Output) -> Result<bool, Error> {
    let g = read_graph(path)?;
    let verdict = is_sparse(&g, k)?;
    eprintln!(
        "{}: {}",
        describe(&g),
        if verdict.tight {
            format!("(2,{k})-tight")
        } else if verdict.sparse {
            format!("(2,{k})-sparse, not tight")
        } else {
            format!(
                "not (2,{k})-sparse, witness {:?}",
                verdict.witness.as_deref().unwrap_or(&[])
            )
        }
    );
    emit(&verdict, out)?;
    Ok(verdict.tight)
}

fn reduce_cmd(path: &Path, k: u8, replay_check: bool, out: &Output) -> Result<bool, Error> {
    let g = read_graph(path)?;
    let cert = match reduce(&g, k) {
        Ok(c) => c,
        Err(Error::NotTight { k }) => {
            eprintln!("{} is not (2,{k})-tight", describe(&g));
            return Ok(false);
        }
        Err(e) => return Err(e),
    };
    if replay_check && replay(&cert)? != g {
        return Err(Error::InvalidCertificate(
            "replay does not reproduce the input".into(),
        ));
    }
    eprintln!(
        "{}: {} steps from {}{}",
        describe(&g),
        cert.total_steps(),
        cert.base.name(),
        if replay_check {
            ", replay verified"
        } else {
            ""
        }
    );
    emit(&cert, out)?;
    Ok(true)
}

#[derive(Serialize)]
struct Generated {
    seed: u64,
    graph: SimpleGraph,
    certificate: Certificate,
}

fn generate_cmd(n: usize, k: u8, seed: u64, out: &Output) -> Result<bool, Error> {
    let (graph, certificate) = generate(n, k, seed)?;
    eprintln!(
        "{}: {} steps, seed {seed}",
        describe(&graph),
        certificate.total_steps()
    );
    emit(
        &Generated {
            seed,
            graph,
            certificate,
        },
        out,
    )?;
    Ok(true)
}

fn placed(
    g: &SimpleGraph,
    s: &Surface,
    points: &Value,
    k: Option<u8>,
    float: bool,
) -> Result<RigidityReport, Error> {
    let bad = || Error::Parse("placement must be an array of [x, y, z] triples".into());
    let rows = points.as_array().ok_or_else(bad)?;
    if float {
        let pts = rows
            .iter()
            .map(|row| {
                let row = row.as_array().filter(|r| r.len() == 3).ok_or_else(bad)?;
                let mut p = [0.0; 3];
                for (x, v) in p.iter_mut().zip(row) {
                    *x = match v {
                        Value::Number(n) => n.as_f64().ok_or_else(bad)?,
                        Value::String(t) => surfrig::rational::to_f64(&parse_q(t)?),
                        _ => return Err(bad()),
                    };
                }
                Ok(p)
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let k = k
            .or(s.declared_type)
            .ok_or_else(|| Error::UnknownType(s.name.clone()))?;
        return analyze_float(g, s, &pts, k, None);
    }
    let pts = rows
        .iter()
        .map(|row| {
            let row = row.as_array().filter(|r| r.len() == 3).ok_or_else(bad)?;
            let mut p: [surfrig::rational::Q; 3] = Default::default();
            for (x, v) in p.iter_mut().zip(row) {
                *x = match v {
                    Value::String(t) => parse_q(t)?,
                    Value::Number(n) => parse_q(&n.to_string())?,
                    _ => return Err(bad()),
                };
            }
            Ok(Point3(p))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let f = Framework::new(g.clone(), s.clone(), pts)?;
    analyze_placement(&f, k, &ExactBackend)
}

#[derive(Serialize)]
struct TypeReport {
    surface: String,
    k: u8,
    declared: Option<u8>,
    strength: &'static str,
    trials: usize,
    seed: u64,
}

#[derive(Serialize)]
struct TrialResult {
    index: usize,
    n: usize,
    m: usize,
    graph_seed: u64,
    steps: Option<usize>,
    report: Option<RigidityReport>,
    error: Option<String>,
    pass: bool,
}

#[derive(Serialize)]
struct VerifySummary {
    n: usize,
    k: u8,
    surface: String,
    seed: u64,
    trials: usize,
    expect: Expect,
    passed: usize,
    failed: usize,
    results: Vec<TrialResult>,
}

fn smallest(k: u8, n: usize) -> usize {
    match k {
        1 => 5,
        2 if n < 4 => 1,
        2 => 4,
        _ => 2,
    }
}

#[allow(clippy::too_many_arguments)]
fn verify(
    n: usize,
    k: u8,
    spec: &str,
    trials: usize,
    seed: u64,
    expect: Expect,
    float: bool,
    out: &Output,
) -> Result<bool, Error> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidK(k));
    }
    let lo = smallest(k, n);
    if n < lo {
        return Err(Error::Unreachable { n, k });
    }
    let surface = parse_surface(spec)?;
    let opts = AnalyzeOptions {
        seed,
        backend: if float { "float" } else { "exact" }.into(),
        ..AnalyzeOptions::default()
    };
    let results: Vec<TrialResult> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i as u64);
            let size = if lo == 1 { 1 } else { rng.gen_range(lo..=n) };
            let graph_seed: u64 = rng.gen();
            let mut result = TrialResult {
                index: i,
                n: size,
                m: 0,
                graph_seed,
                steps: None,
                report: None,
                error: None,
                pass: false,
            };
            let outcome = (|| -> Result<(), Error> {
                let (g, _) = generate(size, k, graph_seed)?;
                result.m = g.m();
                let cert = reduce(&g, k)?;
                if replay(&cert)? != g {
                    return Err(Error::InvalidCertificate("replay mismatch".into()));
                }
                result.steps = Some(cert.total_steps());
                let report = analyze(
                    &g,
                    &surface,
                    &AnalyzeOptions {
                        seed: seed.wrapping_add(i as u64),
                        ..opts.clone()
                    },
                )?;
                result.pass = meets(&report, expect, float);
                result.report = Some(report);
                Ok(())
            })();
            if let Err(e) = outcome {
                result.error = Some(e.to_string());
            }
            result
        })
        .collect();
    let passed = results.iter().filter(|r| r.pass).count();
    let label = match expect {
        Expect::Isostatic => "isostatic",
        Expect::Dependent => "dependent",
    };
    eprintln!("{passed}/{trials} {label} on {}", surface.name);
    let summary = VerifySummary {
        n,
        k,
        surface: surface.name.clone(),
        seed,
        trials,
        expect,
        passed,
        failed: trials - passed,
        results,
    };
    emit(&summary, out)?;
    Ok(passed == trials)
}
