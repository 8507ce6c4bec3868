//! Command-line frontend: L-values, incomplete gamma values, exact Bernoulli
//! and Euler numbers, the Landau–Ramanujan constant, and a benchmark harness.
//!
//! [`run_command`] does all the work and returns the exit code and output, so
//! the binary is a thin wrapper and tests can drive the CLI in-process.

pub mod bench;

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use zetaburst::afe::{lfunc_eval_with_plan, LValue, LValueRequest};
use zetaburst::chars::DirichletChar;
use zetaburst::exactvals::{bernoulli_exact_with, euler_exact_with, landau_ramanujan, ExactMethod};
use zetaburst::incgamma::{estimate_log_incgamma, incgamma_bitburst};
use zetaburst::numcore::{parse_decimal, parse_rational, to_decimal, Ball};
use zetaburst::oracles::{incgamma_naive, l_em, ramanujan_zeta_half, zeta_euler_product};
use zetaburst::{Error, Rational};

/// Exit code for domain, parse and precondition errors.
pub const EXIT_USAGE: i32 = 2;
/// Exit code when a tolerance or resource cap cannot be met.
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "zetaburst", version, about = "Rigorous high-precision Dirichlet L-values")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// L(s, χ) for a Conrey label q.n and rational s.
    Lvalue {
        #[arg(long = "char", default_value = "1.1")]
        chi: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 50)]
        digits: u32,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, value_enum, default_value_t = LAlgorithm::Auto)]
        algorithm: LAlgorithm,
    },
    /// Γ(a, z) for rational a and z > 0.
    Incgamma {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        z: String,
        #[arg(long, default_value_t = 50)]
        digits: u32,
        #[arg(long, value_enum, default_value_t = GAlgorithm::Bitburst)]
        algorithm: GAlgorithm,
    },
    /// The exact Bernoulli number B_N.
    Bernoulli {
        n: u64,
        #[arg(long, value_enum, default_value_t = XAlgorithm::Afe)]
        algorithm: XAlgorithm,
    },
    /// The exact Euler number E_N.
    Euler {
        n: u64,
        #[arg(long, value_enum, default_value_t = XAlgorithm::Afe)]
        algorithm: XAlgorithm,
    },
    /// A mathematical constant.
    Constant {
        #[arg(value_enum)]
        name: ConstantName,
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// Run a benchmark suite described by a TOML file.
    Bench {
        spec: std::path::PathBuf,
        #[arg(long, value_enum, default_value_t = bench::Format::Csv)]
        format: bench::Format,
        /// Run cells concurrently (timings are then not meaningful).
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LAlgorithm {
    Auto,
    Afe,
    Em,
    Ep,
    Ramanujan,
}

impl LAlgorithm {
    pub fn name(self) -> &'static str {
        match self {
            LAlgorithm::Auto | LAlgorithm::Afe => "afe",
            LAlgorithm::Em => "em",
            LAlgorithm::Ep => "ep",
            LAlgorithm::Ramanujan => "ramanujan",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GAlgorithm {
    Bitburst,
    Naive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum XAlgorithm {
    Afe,
    Ep,
}

impl XAlgorithm {
    fn method(self) -> ExactMethod {
        match self {
            XAlgorithm::Afe => ExactMethod::Afe,
            XAlgorithm::Ep => ExactMethod::EulerProduct,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstantName {
    LandauRamanujan,
}

/// Result of one invocation.
#[derive(Debug, Clone, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Errors surfaced by the CLI, with their exit codes.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Core(Error::Resource(_)) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses and runs `argv` (including the program name).
pub fn run_command<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Output { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(cli.cmd) {
        Ok(stdout) => Output { code: 0, stdout, stderr: String::new() },
        Err(e) => Output {
            code: e.code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn dispatch(cmd: Command) -> CliResult<String> {
    match cmd {
        Command::Lvalue { chi, s, digits, alpha, algorithm } => {
            let chi = DirichletChar::from_str(&chi)?;
            let s = parse_q(&s)?;
            let alpha = alpha.as_deref().map(parse_q).transpose()?;
            let r = lvalue(&chi, &s, digits, alpha, algorithm)?;
            Ok(r.render())
        }
        Command::Incgamma { a, z, digits, algorithm } => incgamma(&a, &z, digits, algorithm),
        Command::Bernoulli { n, algorithm } => exact(n, algorithm, true),
        Command::Euler { n, algorithm } => exact(n, algorithm, false),
        Command::Constant { name: ConstantName::LandauRamanujan, digits } => {
            let t = Instant::now();
            let v = landau_ramanujan(digits_to_bits(digits))?;
            let secs = t.elapsed().as_secs_f64();
            let text = to_decimal(&v, digits as usize);
            let rec = json!({
                "constant": "landau-ramanujan",
                "digits": digits,
                "value": mid_text(&text),
                "radius": rad_text(&text),
                "seconds": secs,
            });
            Ok(format!("{text}\n{rec}\n"))
        }
        Command::Bench { spec, format, parallel } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", spec.display())))?;
            let spec = bench::BenchSpec::parse(&text)?;
            let table = bench::run_suite(&spec, parallel);
            Ok(table.render(format))
        }
    }
}

/// `p/q`, an integer, or a plain decimal.
pub fn parse_q(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    if t.contains('/') {
        Rational::from_str(t).map_err(|_| Error::Parse(format!("malformed rational {t:?}")))
    } else {
        parse_rational(t)
    }
}

/// Bits needed for `digits` decimal digits, plus a few guard bits.
pub fn digits_to_bits(digits: u32) -> u32 {
    ((digits.max(1) as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 4
}

fn mid_text(t: &str) -> &str {
    t.split(" +/- ").next().unwrap_or(t)
}

fn rad_text(t: &str) -> &str {
    t.split(" +/- ").nth(1).unwrap_or("0")
}

/// One computed L-value and its bookkeeping.
#[derive(Debug, Clone)]
pub struct LValueReport {
    pub chi: DirichletChar,
    pub s: Rational,
    pub digits: u32,
    pub value: LValue,
    pub algorithm: LAlgorithm,
    pub seconds: f64,
    pub n1: Option<u64>,
    pub n2: Option<u64>,
    pub terms: Option<u64>,
    pub peak_bits: Option<u32>,
}

impl LValueReport {
    /// Decimal serialization of the real part (and imaginary part, if any).
    pub fn decimal(&self) -> (String, Option<String>) {
        let d = self.digits as usize;
        match &self.value {
            LValue::Real(b) => (to_decimal(b, d), None),
            LValue::Complex(c) => (to_decimal(&c.re, d), Some(to_decimal(&c.im, d))),
        }
    }

    pub fn json(&self) -> serde_json::Value {
        let (re, im) = self.decimal();
        json!({
            "char": self.chi.label(),
            "s": self.s.to_string(),
            "digits": self.digits,
            "value": mid_text(&re),
            "imag": im.as_deref().map(mid_text),
            "radius": rad_text(&re),
            "imag_radius": im.as_deref().map(rad_text),
            "algorithm": self.algorithm.name(),
            "seconds": self.seconds,
            "N1": self.n1,
            "N2": self.n2,
        })
    }

    fn render(&self) -> String {
        let (re, im) = self.decimal();
        let mut out = re;
        if let Some(im) = im {
            let _ = write!(out, "\n{im} i");
        }
        let _ = writeln!(out, "\n{}", self.json());
        out
    }
}

/// Evaluates `L(s, χ)` to `digits` digits with the chosen algorithm.
pub fn lvalue(
    chi: &DirichletChar,
    s: &Rational,
    digits: u32,
    alpha: Option<Rational>,
    algorithm: LAlgorithm,
) -> CliResult<LValueReport> {
    let bits = digits_to_bits(digits);
    let t = Instant::now();
    let mut rep = LValueReport {
        chi: chi.clone(),
        s: s.clone(),
        digits,
        value: LValue::Real(Ball::zero()),
        algorithm,
        seconds: 0.0,
        n1: None,
        n2: None,
        terms: None,
        peak_bits: None,
    };
    match algorithm {
        LAlgorithm::Auto | LAlgorithm::Afe => {
            let mut req = LValueRequest::new(chi.clone(), s.clone(), bits);
            if let Some(a) = alpha {
                req = req.with_alpha(a);
            }
            let (v, plan) = lfunc_eval_with_plan(&req)?;
            rep.value = v;
            if let Some(p) = plan {
                rep.n1 = Some(p.n1);
                rep.n2 = Some(if p.symmetric { p.n1 } else { p.n2 });
                rep.terms = Some(p.n1 + if p.symmetric { 0 } else { p.n2 });
                rep.peak_bits = Some(p.wp);
            }
        }
        LAlgorithm::Em => {
            let r = l_em(chi, s, bits)?;
            rep.terms = Some(r.terms);
            rep.value = r.value;
        }
        LAlgorithm::Ep => {
            let r = zeta_euler_product(s, chi, bits)?;
            rep.terms = Some(r.terms);
            rep.value = r.value;
        }
        LAlgorithm::Ramanujan => {
            if chi.modulus() != 1 || *s.numer() != 1 || *s.denom() != 2 {
                return Err(CliError::Usage(
                    "the ramanujan algorithm only computes zeta(1/2)".into(),
                ));
            }
            let r = ramanujan_zeta_half(bits)?;
            rep.terms = Some(r.terms);
            rep.value = r.value;
        }
    }
    rep.seconds = t.elapsed().as_secs_f64();
    Ok(rep)
}

fn incgamma(a: &str, z: &str, digits: u32, algorithm: GAlgorithm) -> CliResult<String> {
    let a = parse_q(a)?;
    let bits = digits_to_bits(digits);
    let z = parse_decimal(z, bits + 64)?;
    if !z.is_positive() {
        return Err(Error::Domain("incomplete gamma needs z > 0".into()).into());
    }
    // absolute precision from the magnitude estimate, with slack for its error
    let est = estimate_log_incgamma(&a, z.mid());
    let p = bits as i64 - est + 16;
    let t = Instant::now();
    let v = match algorithm {
        GAlgorithm::Bitburst => incgamma_bitburst(&a, &z, p)?,
        GAlgorithm::Naive => incgamma_naive(&a, &z, p)?.ball().clone(),
    };
    let secs = t.elapsed().as_secs_f64();
    let text = to_decimal(&v, digits as usize);
    let rec = json!({
        "a": a.to_string(),
        "z": z.mid().to_string(),
        "digits": digits,
        "value": mid_text(&text),
        "radius": rad_text(&text),
        "algorithm": match algorithm { GAlgorithm::Bitburst => "bitburst", GAlgorithm::Naive => "naive" },
        "seconds": secs,
    });
    Ok(format!("{text}\n{rec}\n"))
}

fn exact(n: u64, algorithm: XAlgorithm, bernoulli: bool) -> CliResult<String> {
    let r = if bernoulli {
        bernoulli_exact_with(n, algorithm.method())?
    } else {
        euler_exact_with(n, algorithm.method())?
    };
    let text = if *r.value.denom() == 1 {
        r.value.numer().to_string()
    } else {
        r.value.to_string()
    };
    let rec = json!({
        "number": if bernoulli { "bernoulli" } else { "euler" },
        "n": n,
        "numerator_digits": r.numerator_digits,
        "denominator": r.value.denom().to_string(),
        "bits": r.bits,
        "algorithm": match algorithm { XAlgorithm::Afe => "afe", XAlgorithm::Ep => "ep" },
        "seconds": r.elapsed.as_secs_f64(),
    });
    Ok(format!("{text}\n{rec}\n"))
}
