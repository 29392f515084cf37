//! Command-line grammar.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcoin_core::{BigInt, BigRational};

#[derive(Debug, Parser)]
#[command(name = "qcoin", version, about = "Run-length pattern counts and probabilities for quantum coins")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Exact rational output (default whenever inputs are rational).
    #[arg(long, global = true, conflicts_with = "float")]
    pub exact: bool,

    /// Binary64 output.
    #[arg(long, global = true)]
    pub float: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integer sequences: Fibonacci, Lucas, N-Bonacci and the Lucas identities.
    Seq(SeqArgs),
    /// Number of allowed strings, or their total weight with `--probs`.
    Count(PatternArgs),
    /// List the allowed strings in lexicographic order.
    Enumerate(PatternArgs),
    /// Allowed binary strings read as integers.
    Decimal(PatternArgs),
    /// Closed-form probabilities.
    Prob {
        #[command(subcommand)]
        kind: ProbCommand,
    },
    /// Generating-function values and truncated series.
    Genfun(GenfunArgs),
    /// Entropy of the completion-time distribution, or of a single coin.
    Entropy(EntropyArgs),
    /// Consecutive count or probability ratios.
    Golden(GoldenArgs),
    /// Whether one outcome string is allowed.
    Check(CheckArgs),
    /// Uniform `n`-qudit state: amplitudes and basis entropy.
    State(StateArgs),
    /// Tree projector for a pattern, applied to the uniform state or to `--amps`.
    Project(ProjectArgs),
    /// Seeded Monte Carlo sampling of measurement strings.
    Simulate(SimulateArgs),
    /// Cross-check closed forms against brute-force enumeration.
    Oracle {
        #[command(subcommand)]
        kind: OracleCommand,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeqKind {
    Fibonacci,
    Lucas,
    Tribonacci,
    Nbonacci,
    /// N-Bonacci with multiplier `d - 1`.
    GenNbonacci,
    /// `F_m F_n` through Lucas numbers.
    LucasProduct,
    /// `Σ_{k=1}^{n-1} F_k F_{n-k}` through Lucas numbers.
    SumProduct,
}

#[derive(Debug, Args)]
pub struct SeqArgs {
    #[arg(long, value_enum)]
    pub kind: SeqKind,
    /// Index; negative values are accepted for Fibonacci and Lucas.
    #[arg(long, allow_negative_numbers = true, required_unless_present = "max_n")]
    pub n: Option<i64>,
    /// Print every term from index 0 through this one instead.
    #[arg(long = "max-n", conflicts_with = "n")]
    pub max_n: Option<u64>,
    #[arg(long = "N", default_value_t = 2)]
    pub run: usize,
    #[arg(long, default_value_t = 2)]
    pub d: u64,
    /// First index of `lucas-product`.
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PositionArg {
    End,
    At,
    Anywhere,
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    #[arg(long, default_value_t = 2)]
    pub d: u8,
    #[arg(long = "N")]
    pub run: usize,
    #[arg(long)]
    pub n: usize,
    /// Symbol forming the run.
    #[arg(long, default_value_t = 1)]
    pub target: u8,
    #[arg(long, value_enum, default_value_t = PositionArg::End)]
    pub position: PositionArg,
    /// 1-based start of the run for `--position at`.
    #[arg(long, required_if_eq("position", "at"))]
    pub k: Option<usize>,
    /// Coin probabilities `p0,p1,...` as `a/b` or decimals.
    #[arg(long, value_parser = parse_probs)]
    pub probs: Option<Probs>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Outcome digits, e.g. `01100`.
    #[arg(long)]
    pub string: String,
    #[arg(long, default_value_t = 2)]
    pub d: u8,
    #[arg(long = "N")]
    pub run: usize,
    #[arg(long, default_value_t = 1)]
    pub target: u8,
    #[arg(long, value_enum, default_value_t = PositionArg::End)]
    pub position: PositionArg,
    #[arg(long, required_if_eq("position", "at"))]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long, default_value_t = 2)]
    pub d: u8,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub pattern: PatternArgs,
    /// Sparse real amplitudes `index:value,...`; the uniform state otherwise.
    #[arg(long, value_parser = parse_amps, allow_negative_numbers = true)]
    pub amps: Option<Amps>,
}

#[derive(Debug, Subcommand)]
pub enum ProbCommand {
    /// `P_n` for the fair `d`-sided coin, run at the end.
    End {
        #[arg(long, default_value_t = 2)]
        d: u64,
        #[arg(long = "N")]
        run: usize,
        #[arg(long)]
        n: u64,
    },
    /// Fair qubit, run of `N` ones starting at position `k`.
    Position {
        #[arg(long = "N", default_value_t = 2)]
        run: usize,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        /// Use the Lucas-number form (`N = 2` only).
        #[arg(long)]
        lucas: bool,
    },
    /// Fair qubit, run of `N` ones anywhere.
    Anywhere {
        #[arg(long = "N", default_value_t = 2)]
        run: usize,
        #[arg(long)]
        n: u64,
        /// Use the Lucas-number form (`N = 2` only).
        #[arg(long)]
        lucas: bool,
    },
    /// Arbitrary coin, run at the end.
    Generic {
        #[arg(long, value_parser = parse_probs)]
        probs: Probs,
        #[arg(long, default_value_t = 1)]
        target: usize,
        #[arg(long = "N")]
        run: usize,
        #[arg(long)]
        n: u64,
    },
    /// Bloch-sphere qubit at polar angle `theta`, run of ones at the end.
    Bloch {
        #[arg(long, value_parser = parse_angle, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long = "N")]
        run: usize,
        #[arg(long)]
        n: u64,
    },
    /// `Σ_{n=N}^{max-n} P_n` with a bound on the remaining mass.
    Completeness {
        #[arg(long, default_value_t = 2)]
        d: u64,
        #[arg(long = "N")]
        run: usize,
        #[arg(long = "max-n")]
        max_n: u64,
    },
    /// Outcome probabilities of a Bloch-sphere qubit.
    Coin {
        #[arg(long, value_parser = parse_angle, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, value_parser = parse_angle, allow_negative_numbers = true, default_value = "0")]
        phi: f64,
    },
    /// Outcome probabilities of `α|+⟩ + β|−⟩` measured in the computational basis.
    Superposition {
        /// `re,im`
        #[arg(long, value_parser = parse_complex, allow_negative_numbers = true)]
        alpha: (f64, f64),
        /// `re,im`
        #[arg(long, value_parser = parse_complex, allow_negative_numbers = true)]
        beta: (f64, f64),
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenfunKind {
    /// `Σ P_{n+2} x^n = 1/(4 - 2x - x²)`.
    Duplicated,
    /// `Σ T_n x^n = x²/(1 - x - x² - x³)`.
    TribonacciNumbers,
    /// `Σ P_{n+3} x^n = 1/(8 - 4x - 2x² - x³)`.
    TribonacciProb,
}

#[derive(Debug, Args)]
pub struct GenfunArgs {
    #[arg(long, value_enum)]
    pub kind: GenfunKind,
    /// Evaluation point, `a/b` or decimal.
    #[arg(long, value_parser = parse_rational, allow_negative_numbers = true)]
    pub x: BigRational,
    /// Sum this many series terms instead of evaluating the closed form.
    #[arg(long, conflicts_with = "coefficients")]
    pub terms: Option<usize>,
    /// List this many series coefficients; `--x` is ignored.
    #[arg(long)]
    pub coefficients: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long, default_value_t = 2)]
    pub d: u64,
    #[arg(long = "N", required_unless_present = "probs")]
    pub run: Option<usize>,
    /// Partial sum through this trial count.
    #[arg(long = "max-n", required_unless_present_any = ["probs", "n"])]
    pub max_n: Option<u64>,
    /// A single term `-P_n log2 P_n`, its successor ratio, and (fair qubit,
    /// `N = 2`) the leading-order asymptotic term.
    #[arg(long, conflicts_with = "max_n")]
    pub n: Option<u64>,
    /// Entropy of a single coin instead of the series.
    #[arg(long, value_parser = parse_probs, conflicts_with_all = ["run", "max_n", "n"])]
    pub probs: Option<Probs>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RatioArg {
    Count,
    Prob,
    AnywhereCount,
    AnywhereProb,
}

#[derive(Debug, Args)]
pub struct GoldenArgs {
    #[arg(long, value_enum)]
    pub kind: RatioArg,
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub pattern: PatternArgs,
    #[arg(long)]
    pub shots: u64,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Compare every closed form with enumeration for `N <= n <= max-n`.
    Verify {
        #[arg(long, default_value_t = 2)]
        d: u8,
        #[arg(long = "N")]
        run: usize,
        #[arg(long = "max-n")]
        max_n: usize,
    },
}

/// `a/b`, an integer, or a plain decimal such as `-0.125`.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
        let den: BigInt = den.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
        if den == BigInt::from(0) {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(BigRational::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits_ok = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    if (int.is_empty() && frac.is_empty()) || !digits_ok(int) || !digits_ok(frac) {
        return Err(format!("`{s}` is not a rational number"));
    }
    let mantissa: BigInt = format!("{int}{frac}").parse().map_err(|_| format!("`{s}` is not a rational number"))?;
    let value = BigRational::new(mantissa, BigInt::from(10).pow(frac.len() as u32));
    Ok(if negative { -value } else { value })
}

/// Comma-separated coin probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Probs(pub Vec<BigRational>);

fn parse_probs(s: &str) -> Result<Probs, String> {
    s.split(',').map(parse_rational).collect::<Result<_, _>>().map(Probs)
}

/// A real number, optionally a multiple or fraction of `pi`: `1.2`, `pi`,
/// `pi/2`, `2pi/3`, `-pi/4`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let Some(at) = t.find("pi") else {
        return t.parse().map_err(|_| format!("`{s}` is not a number"));
    };
    let coeff = match &t[..at] {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.trim_end_matches('*').parse::<f64>().map_err(|_| format!("bad multiplier in `{s}`"))?,
    };
    let rest = &t[at + 2..];
    let divisor = match rest.strip_prefix('/') {
        Some(d) => d.parse::<f64>().map_err(|_| format!("bad divisor in `{s}`"))?,
        None if rest.is_empty() => 1.0,
        None => return Err(format!("`{s}` is not an angle")),
    };
    Ok(coeff * std::f64::consts::PI / divisor)
}

/// Sparse amplitudes as `(basis index, real value)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Amps(pub Vec<(usize, f64)>);

fn parse_amps(s: &str) -> Result<Amps, String> {
    s.split(',')
        .map(|item| {
            let (i, v) = item
                .split_once(':')
                .ok_or_else(|| format!("`{item}` is not `index:value`"))?;
            let i = i.trim().parse().map_err(|_| format!("bad index in `{item}`"))?;
            let v = v.trim().parse().map_err(|_| format!("bad amplitude in `{item}`"))?;
            Ok((i, v))
        })
        .collect::<Result<_, _>>()
        .map(Amps)
}

fn parse_complex(s: &str) -> Result<(f64, f64), String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re = re.trim().parse().map_err(|_| format!("bad real part in `{s}`"))?;
    let im = im.trim().parse().map_err(|_| format!("bad imaginary part in `{s}`"))?;
    Ok((re, im))
}
