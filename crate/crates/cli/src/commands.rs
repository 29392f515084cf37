//! Dispatch from parsed arguments to library calls.

use qcoin_core::analysis::{self, GeneratingFunction, RatioKind};
use qcoin_core::patterns::{self, PatternSpec, Position};
use qcoin_core::probability;
use qcoin_core::sequences::{self, SequenceParams};
use qcoin_core::statevec::{self, RngSpec};
use qcoin_core::{coin_entropy, BigInt, CoinSpec, Complex64, Error, Scalar, SeriesResult};

use crate::args::*;
use crate::emit::Output;

pub enum Failure {
    /// Bad flag values; exit code 2.
    Usage(String),
    /// The computation itself failed; exit code 1.
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_)
            | Error::InvalidPattern(_)
            | Error::InvalidCoin(_)
            | Error::PositionOutOfRange { .. } => Failure::Usage(e.to_string()),
            other => Failure::Compute(other),
        }
    }
}

/// A result plus whether it reports success; failed oracle checks still
/// print their report.
pub struct Report {
    pub output: Output,
    pub ok: bool,
}

type Outcome = Result<Output, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

pub fn execute(cli: &Cli) -> Result<Report, Failure> {
    let output = match &cli.command {
        Command::Seq(a) => seq(a)?,
        Command::Count(a) => count(a, cli.float)?,
        Command::Enumerate(a) => {
            let strings = patterns::enumerate_allowed(a.n, &pattern(a)?)?;
            Output::List(strings.iter().map(|s| Output::Text(s.to_string())).collect())
        }
        Command::Decimal(a) => {
            let states = patterns::decimal_states(a.n, &pattern(a)?)?;
            Output::List(states.into_iter().map(Output::int).collect())
        }
        Command::Prob { kind } => prob(kind, cli.float)?,
        Command::Genfun(a) => genfun(a, cli.float)?,
        Command::Entropy(a) => entropy(a)?,
        Command::Golden(a) => {
            let kind = match a.kind {
                RatioArg::Count => RatioKind::Count,
                RatioArg::Prob => RatioKind::Prob,
                RatioArg::AnywhereCount => RatioKind::AnywhereCount,
                RatioArg::AnywhereProb => RatioKind::AnywhereProb,
            };
            Output::Real(analysis::golden_ratio_limit(kind, a.n)?)
        }
        Command::Check(a) => check(a)?,
        Command::State(a) => {
            let psi = statevec::uniform_state(a.d, a.n)?;
            Output::record([
                ("amplitudes", Output::List(psi.amplitudes().iter().map(|c| Output::Real(c.re)).collect())),
                ("basisEntropy", Output::Real(psi.basis_entropy())),
            ])
        }
        Command::Project(a) => project(a)?,
        Command::Simulate(a) => simulate(a)?,
        Command::Oracle { kind: OracleCommand::Verify { d, run, max_n } } => {
            return oracle_verify(*d, *run, *max_n);
        }
    };
    let output = if cli.float { output.into_float() } else { output };
    Ok(Report { output, ok: true })
}

fn non_negative(n: i64) -> Result<u64, Failure> {
    u64::try_from(n).or_else(|_| usage(format!("index {n} must be >= 0 for this sequence")))
}

fn seq(a: &SeqArgs) -> Outcome {
    if let Some(max) = a.max_n {
        let terms: Vec<BigInt> = match a.kind {
            SeqKind::Fibonacci => (0..=max as i64).map(sequences::fibonacci).collect::<Result<_, _>>()?,
            SeqKind::Lucas => (0..=max as i64).map(sequences::lucas).collect::<Result<_, _>>()?,
            SeqKind::Tribonacci => sequences::gen_nbonacci_terms(SequenceParams::nbonacci(3)?, max)?,
            SeqKind::Nbonacci => sequences::gen_nbonacci_terms(SequenceParams::nbonacci(a.run)?, max)?,
            SeqKind::GenNbonacci => {
                sequences::gen_nbonacci_terms(SequenceParams::for_alphabet(a.run, a.d)?, max)?
            }
            SeqKind::SumProduct => (2..=max as i64)
                .map(sequences::sum_product_identity)
                .collect::<Result<_, _>>()?,
            SeqKind::LucasProduct => return usage("lucas-product takes --m and --n, not --max-n"),
        };
        return Ok(Output::List(terms.into_iter().map(Output::Int).collect()));
    }
    let n = a.n.expect("clap requires --n without --max-n");
    let value = match a.kind {
        SeqKind::Fibonacci => sequences::fibonacci(n)?,
        SeqKind::Lucas => sequences::lucas(n)?,
        SeqKind::Tribonacci => sequences::tribonacci(non_negative(n)?)?,
        SeqKind::Nbonacci => sequences::nbonacci(a.run, non_negative(n)?)?,
        SeqKind::GenNbonacci => {
            sequences::gen_nbonacci(SequenceParams::for_alphabet(a.run, a.d)?, non_negative(n)?)?
        }
        SeqKind::LucasProduct => {
            let Some(m) = a.m else {
                return usage("lucas-product needs --m");
            };
            sequences::lucas_product_identity(m, n)?
        }
        SeqKind::SumProduct => sequences::sum_product_identity(n)?,
    };
    Ok(Output::Int(value))
}

fn pattern(a: &PatternArgs) -> Result<PatternSpec, Failure> {
    pattern_from(a.d, a.target, a.run, a.position, a.k)
}

fn pattern_from(d: u8, target: u8, run: usize, position: PositionArg, k: Option<usize>) -> Result<PatternSpec, Failure> {
    let position = match position {
        PositionArg::End => Position::End,
        PositionArg::Anywhere => Position::Anywhere,
        PositionArg::At => Position::At(k.expect("clap requires --k with --position at")),
    };
    if k.is_some() && !matches!(position, Position::At(_)) {
        return usage("--k only applies with --position at");
    }
    Ok(PatternSpec::new(d, target, run, position)?)
}

fn check(a: &CheckArgs) -> Outcome {
    let p = pattern_from(a.d, a.target, a.run, a.position, a.k)?;
    let s = patterns::OutcomeString::from_digits(&a.string, a.d)?;
    Ok(Output::Bool(patterns::is_allowed(&s, &p)?))
}

fn coin(probs: &Probs, float: bool) -> Result<CoinSpec, Failure> {
    Ok(if float {
        CoinSpec::real(probs.0.iter().map(|p| Scalar::Exact(p.clone()).to_f64()).collect())?
    } else {
        CoinSpec::exact(probs.0.clone())?
    })
}

fn count(a: &PatternArgs, float: bool) -> Outcome {
    let p = pattern(a)?;
    Ok(match &a.probs {
        Some(probs) => patterns::weighted_count(a.n, &p, &coin(probs, float)?)?.into(),
        None => Output::Int(patterns::count_allowed(a.n, &p)?),
    })
}

fn series_output(r: SeriesResult) -> Output {
    Output::record([
        ("partialSum", r.partial_sum.into()),
        ("termsUsed", Output::int(r.terms_used)),
        ("tailBound", Output::Real(r.tail_bound)),
    ])
}

fn prob(kind: &ProbCommand, float: bool) -> Outcome {
    Ok(match kind {
        ProbCommand::End { d, run, n } => probability::prob_end_uniform(*d, *run, *n)?.into(),
        ProbCommand::Position { run, n, k, lucas } => {
            if *lucas {
                if *run != 2 {
                    return usage("--lucas needs --N 2");
                }
                probability::prob_position_lucas(*n, *k)?.into()
            } else {
                probability::prob_position(*run, *n, *k)?.into()
            }
        }
        ProbCommand::Anywhere { run, n, lucas } => {
            if *lucas {
                if *run != 2 {
                    return usage("--lucas needs --N 2");
                }
                probability::prob_anywhere_lucas(*n)?.into()
            } else {
                probability::prob_anywhere(*run, *n)?.into()
            }
        }
        ProbCommand::Generic { probs, target, run, n } => {
            probability::prob_end_generic(&coin(probs, float)?, *target, *run, *n)?.into()
        }
        ProbCommand::Bloch { theta, run, n } => Output::Real(probability::prob_end_bloch(*theta, *run, *n)?),
        ProbCommand::Completeness { d, run, max_n } => {
            series_output(analysis::completeness_partial_sum(*d, *run, *max_n)?)
        }
        ProbCommand::Coin { theta, phi } => {
            let p = probability::bloch_coin(*theta, *phi).to_f64();
            Output::record([("p0", Output::Real(p[0])), ("p1", Output::Real(p[1]))])
        }
        ProbCommand::Superposition { alpha, beta } => {
            let (p0, p1) = probability::superposition_probs(
                Complex64::new(alpha.0, alpha.1),
                Complex64::new(beta.0, beta.1),
            )?;
            Output::record([("p0", Output::Real(p0)), ("p1", Output::Real(p1))])
        }
    })
}

fn genfun(a: &GenfunArgs, float: bool) -> Outcome {
    let g = match a.kind {
        GenfunKind::Duplicated => GeneratingFunction::DuplicatedProb,
        GenfunKind::TribonacciNumbers => GeneratingFunction::TribonacciNumbers,
        GenfunKind::TribonacciProb => GeneratingFunction::TribonacciProb,
    };
    if let Some(count) = a.coefficients {
        let coeffs = g.coefficients(count)?;
        return Ok(Output::List(
            coeffs
                .into_iter()
                .map(|c| if c.is_integer() { Output::Int(c.to_integer()) } else { Output::Rational(c) })
                .collect(),
        ));
    }
    let x_real = Scalar::Exact(a.x.clone()).to_f64();
    if let Some(terms) = a.terms {
        let partial = g.series(x_real, terms)?;
        let tail = g.series_tail_bound(x_real, terms)?;
        return Ok(series_output(SeriesResult {
            partial_sum: Scalar::Real(partial),
            terms_used: terms,
            tail_bound: tail,
        }));
    }
    let x = if float { Scalar::Real(x_real) } else { Scalar::Exact(a.x.clone()) };
    Ok(g.closed_form(&x)?.into())
}

fn entropy(a: &EntropyArgs) -> Outcome {
    if let Some(probs) = &a.probs {
        return Ok(Output::Real(coin_entropy(&coin(probs, false)?)));
    }
    let Some(run) = a.run else {
        return usage("entropy needs --N, or --probs");
    };
    if let Some(n) = a.n {
        let term = analysis::entropy_term(a.d, run, n)?;
        let next = analysis::entropy_term(a.d, run, n + 1)?;
        let mut fields = vec![
            ("n", Output::int(n)),
            ("term", Output::Real(term)),
            ("nextRatio", Output::Real(next / term)),
        ];
        if a.d == 2 && run == 2 {
            fields.push(("asymptotic", Output::Real(analysis::entropy_asymptotic_term(n))));
        }
        return Ok(Output::record(fields));
    }
    let max_n = a.max_n.expect("clap requires --max-n without --n or --probs");
    Ok(series_output(analysis::entropy_series(a.d, run, max_n)?))
}

fn project(a: &ProjectArgs) -> Outcome {
    let args = &a.pattern;
    if args.probs.is_some() {
        return usage("project takes a state through --amps, not --probs");
    }
    let projector = statevec::build_projector(args.n, &pattern(args)?)?;
    let psi = match &a.amps {
        Some(Amps(entries)) => {
            let entries: Vec<(usize, Complex64)> = entries.iter().map(|&(i, v)| (i, Complex64::new(v, 0.0))).collect();
            statevec::StateVector::from_sparse(args.d, args.n, &entries)?
        }
        None => statevec::uniform_state(args.d, args.n)?,
    };
    let born = statevec::born_probability(&psi, &projector)?;
    let collapsed = statevec::project_and_normalize(&psi, &projector)?;
    let indices = projector.indices();
    Ok(Output::record([
        ("indices", Output::List(indices.iter().map(|&i| Output::int(i)).collect())),
        ("dimension", Output::int(projector.dimension())),
        ("probability", Output::Real(born)),
        (
            "normalized",
            Output::List(indices.iter().map(|&i| Output::Real(collapsed.amplitudes()[i].re)).collect()),
        ),
    ]))
}

fn simulate(a: &SimulateArgs) -> Outcome {
    let p = pattern(&a.pattern)?;
    let coin = match &a.pattern.probs {
        Some(probs) => coin(probs, false)?,
        None => CoinSpec::uniform(a.pattern.d as usize)?,
    };
    let rng = RngSpec::new(a.seed);
    let counts = statevec::sample_trials(&coin, a.pattern.n, a.shots, &[p], rng)?;
    Ok(Output::record([
        ("shots", Output::int(counts.shots)),
        ("count", Output::int(counts.counts[0])),
        ("frequency", Output::Real(counts.frequency(0))),
        ("seed", Output::int(a.seed)),
        ("rng", Output::Text(RngSpec::ALGORITHM.into())),
    ]))
}

fn oracle_verify(d: u8, run: usize, max_n: usize) -> Result<Report, Failure> {
    let params = SequenceParams::for_alphabet(run, d as u64)?;
    let uniform = CoinSpec::uniform(d as usize)?;
    let mut checks = 0u64;
    let mut mismatches = Vec::new();
    let mut check = |ok: bool, what: String| {
        checks += 1;
        if !ok {
            mismatches.push(Output::Text(what));
        }
    };
    for n in run.max(1)..=max_n {
        let end = PatternSpec::ending(d, run)?;
        let brute = patterns::count_allowed(n, &end)?;
        let closed = sequences::gen_nbonacci(params, n as u64 - 1)?;
        check(brute == closed, format!("count n={n}: enumeration {brute}, recursion {closed}"));

        let weighted = patterns::weighted_count(n, &end, &uniform)?;
        let p = probability::prob_end_uniform(d as u64, run, n as u64)?;
        check(weighted == Scalar::Exact(p.clone()), format!("P_{n}: enumeration {weighted}, closed form {p}"));

        let generic = probability::prob_end_generic(&uniform, 1, run, n as u64)?;
        check(generic == Scalar::Exact(p.clone()), format!("P_{n}: recursion {generic}, closed form {p}"));

        if d != 2 || run < 2 {
            continue;
        }
        for k in 1..=n + 1 - run {
            let at = PatternSpec::new(2, 1, run, Position::At(k))?;
            let brute = patterns::weighted_count(n, &at, &uniform)?;
            let closed = probability::prob_position(run, n as u64, k as u64)?;
            check(brute == Scalar::Exact(closed.clone()), format!("position n={n} k={k}: {brute} vs {closed}"));
            if run == 2 && k < n {
                let lucas = probability::prob_position_lucas(n as u64, k as u64)?;
                check(lucas == closed, format!("position Lucas form n={n} k={k}: {lucas} vs {closed}"));
            }
        }
        let anywhere = PatternSpec::new(2, 1, run, Position::Anywhere)?;
        let brute = patterns::weighted_count(n, &anywhere, &uniform)?;
        let closed = probability::prob_anywhere(run, n as u64)?;
        check(brute == Scalar::Exact(closed.clone()), format!("anywhere n={n}: {brute} vs {closed}"));
        if run == 2 {
            let lucas = probability::prob_anywhere_lucas(n as u64)?;
            check(lucas == closed, format!("anywhere Lucas form n={n}: {lucas} vs {closed}"));
        }
    }
    let ok = mismatches.is_empty();
    let output = Output::record([
        ("d", Output::int(d)),
        ("N", Output::int(run)),
        ("maxN", Output::int(max_n)),
        ("checks", Output::int(checks)),
        ("mismatches", Output::List(mismatches)),
        ("allMatch", Output::Bool(ok)),
    ]);
    Ok(Report { output, ok })
}
