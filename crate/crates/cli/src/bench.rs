//! Benchmark suite: a TOML file lists tasks, each with a ladder and a set of
//! algorithms; every (task, ladder value, algorithm) cell is run once.
//!
//! ```toml
//! [[tasks]]
//! task = "zeta-half"            # or "zeta-4/3", "L(1/2|23.19)", "bernoulli", "euler"
//! ladder = [1000, 3162, 10000]  # digits; for bernoulli/euler the index n
//! algorithms = ["afe", "em"]
//! ```
//!
//! Failing cells are recorded with an error message and the suite goes on.

use std::str::FromStr;
use std::time::Instant;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use zetaburst::afe::{choose_truncation, LValue, LValueRequest};
use zetaburst::chars::DirichletChar;
use zetaburst::exactvals::{bernoulli_exact_with, euler_exact_with};
use zetaburst::numcore::{to_decimal, Ball};
use zetaburst::Rational;

use crate::{lvalue, parse_q, CliError, LAlgorithm, XAlgorithm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSpec {
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub task: String,
    pub ladder: Vec<u64>,
    pub algorithms: Vec<String>,
}

impl BenchSpec {
    pub fn parse(text: &str) -> Result<BenchSpec, CliError> {
        let spec: BenchSpec =
            toml::from_str(text).map_err(|e| CliError::Usage(format!("bad bench spec: {e}")))?;
        for t in &spec.tasks {
            Task::parse(&t.task)?;
        }
        Ok(spec)
    }
}

/// A parsed task name.
#[derive(Debug, Clone)]
pub enum Task {
    L { chi: DirichletChar, s: Rational },
    Bernoulli,
    Euler,
}

impl Task {
    pub fn parse(name: &str) -> Result<Task, CliError> {
        let l = |q: u64, n: u64, s: Rational| -> Result<Task, CliError> {
            Ok(Task::L { chi: DirichletChar::new(q, n)?, s })
        };
        match name {
            "zeta-half" => l(1, 1, Rational::from((1, 2))),
            "zeta-4/3" => l(1, 1, Rational::from((4, 3))),
            "bernoulli" => Ok(Task::Bernoulli),
            "euler" => Ok(Task::Euler),
            _ => {
                let inner = name
                    .strip_prefix("L(")
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| CliError::Usage(format!("unknown bench task {name:?}")))?;
                let (s, c) = inner
                    .split_once('|')
                    .ok_or_else(|| CliError::Usage(format!("expected L(s|q.n), got {name:?}")))?;
                Ok(Task::L { chi: DirichletChar::from_str(c.trim())?, s: parse_q(s)? })
            }
        }
    }
}

/// One benchmark cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    /// Task name joined with the algorithm, e.g. `zeta-half-afe`.
    pub task: String,
    /// Ladder value: digits for L-values, the index for exact numbers.
    pub n: u64,
    /// Decimal digits of the result (numerator digits for exact numbers).
    pub digits: u64,
    pub algorithm: String,
    pub seconds: f64,
    pub terms: Option<u64>,
    pub peak_bits: Option<u32>,
    /// Leading 32 digits and the radius exponent.
    pub digest: String,
    pub error: Option<String>,
}

/// `log(t₂/t₁)/log(d₂/d₁)` between consecutive successful cells.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub task: String,
    pub algorithm: String,
    pub digits_from: u64,
    pub digits_to: u64,
    pub exponent: f64,
}

#[derive(Debug, Clone, Default)]
pub struct BenchTable {
    pub records: Vec<BenchRecord>,
    pub scaling: Vec<ScalingRow>,
}

/// `mid|r<e>` with 32 significant digits and `e = ⌈log₂ radius⌉`.
pub fn ball_digest(b: &Ball) -> String {
    let text = to_decimal(&Ball::exact(b.mid().clone()), 32);
    let mid = text.split(" +/- ").next().unwrap_or(&text);
    match b.rad().log2_ceil() {
        Some(e) => format!("{mid}|r{e}"),
        None => format!("{mid}|exact"),
    }
}

fn lvalue_digest(v: &LValue) -> String {
    match v {
        LValue::Real(b) => ball_digest(b),
        LValue::Complex(c) => format!("{};{}", ball_digest(&c.re), ball_digest(&c.im)),
    }
}

fn exact_digest(v: &Rational) -> String {
    let num = v.numer().to_string();
    let lead: String = num.chars().take(33).collect();
    format!("{lead}|{}d/{}|exact", num.trim_start_matches('-').len(), v.denom())
}

fn run_cell(task: &Task, name: &str, n: u64, alg: &str) -> BenchRecord {
    let mut rec = BenchRecord {
        task: format!("{name}-{alg}"),
        n,
        digits: n,
        algorithm: alg.to_string(),
        seconds: 0.0,
        terms: None,
        peak_bits: None,
        digest: String::new(),
        error: None,
    };
    let t = Instant::now();
    let res: Result<(), CliError> = (|| {
        match task {
            Task::L { chi, s } => {
                let a = LAlgorithm::from_str(alg, true)
                    .map_err(|_| CliError::Usage(format!("unknown algorithm {alg:?}")))?;
                let digits = u32::try_from(n).map_err(|_| CliError::Usage("digits too large".into()))?;
                let r = lvalue(chi, s, digits, None, a)?;
                rec.seconds = r.seconds;
                rec.terms = r.terms;
                rec.peak_bits = r.peak_bits;
                rec.digest = lvalue_digest(&r.value);
            }
            Task::Bernoulli | Task::Euler => {
                let a = XAlgorithm::from_str(alg, true)
                    .map_err(|_| CliError::Usage(format!("unknown algorithm {alg:?}")))?;
                let r = if matches!(task, Task::Bernoulli) {
                    bernoulli_exact_with(n, a.method())?
                } else {
                    euler_exact_with(n, a.method())?
                };
                rec.seconds = r.elapsed.as_secs_f64();
                rec.digits = r.numerator_digits as u64;
                rec.peak_bits = Some(r.bits);
                if a == XAlgorithm::Afe && r.bits > 0 {
                    rec.terms = exact_terms(task, n, r.bits);
                }
                rec.digest = exact_digest(&r.value);
            }
        }
        Ok(())
    })();
    if let Err(e) = res {
        rec.seconds = t.elapsed().as_secs_f64();
        rec.error = Some(e.to_string());
    }
    rec
}

/// Terms of the AFE plan for the L-value behind an exact number.
fn exact_terms(task: &Task, n: u64, bits: u32) -> Option<u64> {
    let (chi, s) = match task {
        Task::Bernoulli => (DirichletChar::trivial(), n),
        _ => (DirichletChar::new(4, 3).ok()?, n + 1),
    };
    let plan = choose_truncation(&LValueRequest::new(chi, Rational::from(s), bits)).ok()?;
    Some(plan.n1 + if plan.symmetric { 0 } else { plan.n2 })
}

/// Runs every cell; sequential unless `parallel`.
pub fn run_suite(spec: &BenchSpec, parallel: bool) -> BenchTable {
    let mut cells = Vec::new();
    for t in &spec.tasks {
        let task = Task::parse(&t.task).expect("validated in BenchSpec::parse");
        for &n in &t.ladder {
            for alg in &t.algorithms {
                cells.push((task.clone(), t.task.clone(), n, alg.clone()));
            }
        }
    }
    let records: Vec<BenchRecord> = if parallel {
        std::thread::scope(|sc| {
            let hs: Vec<_> = cells
                .iter()
                .map(|(t, name, n, a)| sc.spawn(move || run_cell(t, name, *n, a)))
                .collect();
            hs.into_iter().map(|h| h.join().expect("bench cell panicked")).collect()
        })
    } else {
        cells.iter().map(|(t, name, n, a)| run_cell(t, name, *n, a)).collect()
    };
    let scaling = scaling_rows(&records);
    BenchTable { records, scaling }
}

pub fn scaling_rows(records: &[BenchRecord]) -> Vec<ScalingRow> {
    let mut keys: Vec<(&str, &str)> = Vec::new();
    for r in records {
        if !keys.contains(&(r.task.as_str(), r.algorithm.as_str())) {
            keys.push((&r.task, &r.algorithm));
        }
    }
    let mut out = Vec::new();
    for (task, alg) in keys {
        let mut rs: Vec<&BenchRecord> = records
            .iter()
            .filter(|r| r.task == task && r.algorithm == alg && r.error.is_none())
            .collect();
        rs.sort_by_key(|r| r.digits);
        for w in rs.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b.digits <= a.digits || a.seconds <= 0.0 || b.seconds <= 0.0 {
                continue;
            }
            out.push(ScalingRow {
                task: task.to_string(),
                algorithm: alg.to_string(),
                digits_from: a.digits,
                digits_to: b.digits,
                exponent: (b.seconds / a.seconds).ln() / (b.digits as f64 / a.digits as f64).ln(),
            });
        }
    }
    out
}

impl BenchTable {
    /// CSV: the record table, then (after a blank line) the scaling table.
    /// JSON: one object per line, records first.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = String::new();
                for r in &self.records {
                    s += &serde_json::to_string(r).expect("serializable");
                    s.push('\n');
                }
                for r in &self.scaling {
                    s += &serde_json::json!({ "scaling": r }).to_string();
                    s.push('\n');
                }
                s
            }
            Format::Csv => {
                let mut s = csv_table(&self.records);
                if !self.scaling.is_empty() {
                    s.push('\n');
                    s += &csv_table(&self.scaling);
                }
                s
            }
        }
    }
}

fn csv_table<T: Serialize>(rows: &[T]) -> String {
    if rows.is_empty() {
        return String::new();
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("csv serialization");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

