//! Generating functions, completeness sums, golden-ratio limits and the
//! Shannon entropy of the pattern-probability distribution over trial counts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::coin::{rational_to_f64, Scalar};
use crate::error::{Error, Result};
use crate::sequences::{self, SequenceParams, MAX_INDEX};

/// The golden ratio `(1 + √5) / 2`.
pub const PHI: f64 = 1.618_033_988_749_895;

const ROOT_TOL: f64 = 1e-14;

/// Slack on tail bounds for the binary64 rounding in the root and the terms.
const BOUND_SLACK: f64 = 1.0 + 1e-9;

/// A truncated series: exact or real partial sum plus a bound on what is left.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub partial_sum: Scalar,
    pub terms_used: usize,
    pub tail_bound: f64,
}

/// Bisection for the root of an increasing function on `[lo, hi]`.
/// Returns the final bracket.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// The three rational generating functions with closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratingFunction {
    /// `Σ_{n>=0} P_{n+2} x^n = 1 / (4 - 2x - x²)`, fair-coin run of two ones.
    DuplicatedProb,
    /// `Σ_{n>=0} T_n x^n = x² / (1 - x - x² - x³)`.
    TribonacciNumbers,
    /// `Σ_{n>=0} P_{n+3} x^n = 1 / (8 - 4x - 2x² - x³)`, fair-coin run of three ones.
    TribonacciProb,
}

impl GeneratingFunction {
    /// Denominator coefficients (constant first) and the numerator's power of `x`.
    fn parts(self) -> (&'static [i64], u32) {
        match self {
            GeneratingFunction::DuplicatedProb => (&[4, -2, -1], 0),
            GeneratingFunction::TribonacciNumbers => (&[1, -1, -1, -1], 2),
            GeneratingFunction::TribonacciProb => (&[8, -4, -2, -1], 0),
        }
    }

    fn denominator_f64(self, x: f64) -> f64 {
        self.parts().0.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
    }

    fn radius_bracket(self) -> (f64, f64) {
        let mut hi = 1.0;
        while self.denominator_f64(hi) > 0.0 {
            hi *= 2.0;
        }
        // The denominator decreases on x > 0, so negate it for bisection.
        bisect(0.0, hi, |x| -self.denominator_f64(x))
    }

    /// Convergence radius: the smallest positive root of the denominator.
    pub fn radius(self) -> f64 {
        let (lo, hi) = self.radius_bracket();
        0.5 * (lo + hi)
    }

    fn check_domain(self, x: f64, at_pole: bool) -> Result<()> {
        if at_pole {
            return Err(Error::Pole { x });
        }
        let radius = self.radius();
        if !x.is_finite() || x.abs() >= radius {
            return Err(Error::OutsideConvergence { x: x.abs(), radius });
        }
        Ok(())
    }

    /// Closed-form value; exact for exact input.
    pub fn closed_form(self, x: &Scalar) -> Result<Scalar> {
        let (den, power) = self.parts();
        match x {
            Scalar::Exact(x) => {
                let q = den.iter().rev().fold(BigRational::zero(), |acc, &c| {
                    acc * x + BigRational::from_integer(BigInt::from(c))
                });
                self.check_domain(rational_to_f64(x), q.is_zero())?;
                Ok(Scalar::Exact(x.pow(power as i32) / q))
            }
            Scalar::Real(x) => {
                let q = self.denominator_f64(*x);
                self.check_domain(*x, q == 0.0)?;
                Ok(Scalar::Real(x.powi(power as i32) / q))
            }
        }
    }

    /// The first `count` series coefficients, exactly.
    pub fn coefficients(self, count: usize) -> Result<Vec<BigRational>> {
        if count == 0 {
            return Ok(Vec::new());
        }
        let last = count as u64 - 1;
        Ok(match self {
            GeneratingFunction::DuplicatedProb => {
                let fib = sequences::gen_nbonacci_terms(SequenceParams::nbonacci(2)?, last + 1)?;
                (0..count)
                    .map(|n| BigRational::new(fib[n + 1].clone(), BigInt::from(1) << (n + 2)))
                    .collect()
            }
            GeneratingFunction::TribonacciNumbers => {
                sequences::gen_nbonacci_terms(SequenceParams::nbonacci(3)?, last)?
                    .into_iter()
                    .map(BigRational::from_integer)
                    .collect()
            }
            GeneratingFunction::TribonacciProb => {
                let trib = sequences::gen_nbonacci_terms(SequenceParams::nbonacci(3)?, last + 2)?;
                (0..count)
                    .map(|n| BigRational::new(trib[n + 2].clone(), BigInt::from(1) << (n + 3)))
                    .collect()
            }
        })
    }

    /// Truncated series `Σ_{n<terms} c_n x^n` in binary64.
    ///
    /// Runs the denominator recurrence on the scaled terms `c_n x^n`, which
    /// stay bounded inside the radius even when `c_n` alone overflows.
    pub fn series(self, x: f64, terms: usize) -> Result<f64> {
        self.check_domain(x, false)?;
        let (den, power) = self.parts();
        let weights: Vec<f64> = den
            .iter()
            .enumerate()
            .map(|(j, &a)| a as f64 * x.powi(j as i32))
            .collect();
        let mut scaled: Vec<f64> = Vec::with_capacity(terms);
        let mut sum = 0.0;
        for n in 0..terms {
            let mut t = if n == power as usize { x.powi(power as i32) } else { 0.0 };
            for j in 1..weights.len().min(n + 1) {
                t -= weights[j] * scaled[n - j];
            }
            t /= weights[0];
            scaled.push(t);
            sum += t;
        }
        Ok(sum)
    }

    /// Upper bound on `|Σ_{n>=terms} c_n x^n|` for `|x|` inside the radius.
    ///
    /// The coefficients obey `c_n = Σ a_j c_{n-j}` with `a_j >= 0` and dominant
    /// root `z = 1/radius`, so `c_m <= C z^m` where `C` is the largest
    /// `c_i / z^i` over the last window of computed coefficients.
    pub fn series_tail_bound(self, x: f64, terms: usize) -> Result<f64> {
        let (den, _) = self.parts();
        let order = den.len() - 1;
        let (lo, _) = self.radius_bracket();
        let ratio = x.abs() / lo;
        if ratio >= 1.0 {
            return Err(Error::OutsideConvergence {
                x: x.abs(),
                radius: self.radius(),
            });
        }
        let count = terms.max(order + 3);
        let coeffs = self.coefficients(count)?;
        let ln_z = -lo.ln();
        let ln_c = (count - order..count)
            .map(|i| ln_rational(&coeffs[i]) - i as f64 * ln_z)
            .fold(f64::NEG_INFINITY, f64::max);
        // Coefficients between `terms` and `count` are bounded directly.
        let direct: f64 = coeffs[terms..count]
            .iter()
            .enumerate()
            .map(|(i, c)| rational_to_f64(c) * x.abs().powi((terms + i) as i32))
            .sum();
        let geometric = (ln_c + count as f64 * (ln_z + x.abs().ln())).exp() / (1.0 - ratio);
        Ok((direct + geometric) * BOUND_SLACK)
    }
}

pub fn genfun_duplicated_prob(x: &Scalar) -> Result<Scalar> {
    GeneratingFunction::DuplicatedProb.closed_form(x)
}

pub fn genfun_tribonacci_numbers(x: &Scalar) -> Result<Scalar> {
    GeneratingFunction::TribonacciNumbers.closed_form(x)
}

pub fn genfun_tribonacci_prob(x: &Scalar) -> Result<Scalar> {
    GeneratingFunction::TribonacciProb.closed_form(x)
}

fn check_series_args(d: u64, run_length: usize, n_max: u64) -> Result<SequenceParams> {
    let params = SequenceParams::for_alphabet(run_length, d)?;
    if n_max < run_length as u64 {
        return Err(Error::InvalidParams(format!(
            "n_max = {n_max} is below the run length {run_length}"
        )));
    }
    if n_max > MAX_INDEX {
        return Err(Error::IndexOutOfRange {
            index: n_max as i64,
            cap: MAX_INDEX,
        });
    }
    Ok(params)
}

/// Exact `P_0 ..= P_{n_max}` for the fair `d`-sided coin.
fn uniform_end_probs(params: SequenceParams, d: u64, n_max: u64) -> Result<Vec<BigRational>> {
    let counts = sequences::gen_nbonacci_terms(params, n_max.saturating_sub(1))?;
    let big_d = BigInt::from(d);
    let mut denom = BigInt::from(1);
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(BigRational::zero());
    for n in 1..=n_max as usize {
        denom *= &big_d;
        if n < params.run_length() {
            out.push(BigRational::zero());
        } else {
            out.push(BigRational::new(counts[n - 1].clone(), denom.clone()));
        }
    }
    Ok(out)
}

/// Upper end of the bracket on the dominant root of
/// `z^N = Σ_{j=1}^{N} ((d-1)/d^j) z^{N-j}`, the fair-coin probability recursion.
pub fn dominant_root(d: u64, run_length: usize) -> f64 {
    let df = d as f64;
    let h = |z: f64| {
        let mut sum = 0.0;
        let mut dj = 1.0;
        let mut zj = 1.0;
        for _ in 0..run_length {
            dj *= df;
            zj *= z;
            sum += (df - 1.0) / (dj * zj);
        }
        1.0 - sum
    };
    bisect(0.0, 1.0, h).1
}

/// `ln` of a positive rational, safe for values far below `f64::MIN_POSITIVE`.
fn ln_rational(r: &BigRational) -> f64 {
    fn ln_int(v: &BigInt) -> f64 {
        let bits = v.bits();
        let shift = bits.saturating_sub(64);
        let top = (v >> shift as usize).to_f64().unwrap_or(f64::NAN);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
    ln_int(r.numer()) - ln_int(r.denom())
}

/// `ln c` for the envelope `P_m <= c·r^m`, valid for every `m > n_max`.
fn envelope_ln_c(probs: &[BigRational], run_length: usize, r: f64) -> f64 {
    let n_max = probs.len() - 1;
    (0..run_length)
        .map(|j| n_max - j)
        .filter(|&i| probs[i].is_positive())
        .map(|i| ln_rational(&probs[i]) - i as f64 * r.ln())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `Σ_{n=N}^{n_max} P_n` for the fair coin, with a bound on the remaining mass.
pub fn completeness_partial_sum(d: u64, run_length: usize, n_max: u64) -> Result<SeriesResult> {
    let params = check_series_args(d, run_length, n_max)?;
    let probs = uniform_end_probs(params, d, n_max)?;
    let partial: BigRational = probs[run_length..].iter().sum();
    let r = dominant_root(d, run_length);
    let ln_c = envelope_ln_c(&probs, run_length, r);
    let tail = (ln_c + (n_max as f64 + 1.0) * r.ln()).exp() / (1.0 - r);
    Ok(SeriesResult {
        partial_sum: Scalar::Exact(partial),
        terms_used: n_max as usize + 1 - run_length,
        tail_bound: tail * BOUND_SLACK,
    })
}

fn entropy_of(p: &BigRational) -> f64 {
    if p.is_zero() {
        return 0.0;
    }
    let ln_p = ln_rational(p);
    -ln_p.exp() * ln_p / std::f64::consts::LN_2
}

/// `-P_n log2 P_n` for the fair `d`-sided coin.
pub fn entropy_term(d: u64, run_length: usize, n: u64) -> Result<f64> {
    let p = crate::probability::prob_end_uniform(d, run_length, n)?;
    Ok(entropy_of(&p))
}

/// Leading-order closed form `n (φ/2)^n log2(2/φ) / √5` for the fair-coin,
/// `N = 2` entropy terms.
pub fn entropy_asymptotic_term(n: u64) -> f64 {
    let n = n as f64;
    n * (PHI / 2.0).powf(n) * (2.0 / PHI).log2() / 5f64.sqrt()
}

/// Partial Shannon entropy `-Σ_{n=N}^{n_max} P_n log2 P_n` of the distribution
/// of the trial count at which the run first completes.
///
/// For the fair qubit with `N = 2` the tail is estimated by summing the
/// asymptotic term. Otherwise the tail is bounded through the envelope
/// `P_m <= c·r^m` and the monotonicity of `-x log x` below `1/e`.
pub fn entropy_series(d: u64, run_length: usize, n_max: u64) -> Result<SeriesResult> {
    let params = check_series_args(d, run_length, n_max)?;
    let probs = uniform_end_probs(params, d, n_max)?;
    let partial: f64 = probs[run_length..].iter().map(entropy_of).sum();
    let tail = if d == 2 && run_length == 2 {
        let q = PHI / 2.0;
        let m = n_max as f64;
        let k = (2.0 / PHI).log2() / 5f64.sqrt();
        k * q.powf(m + 1.0) * ((m + 1.0) - m * q) / ((1.0 - q) * (1.0 - q))
    } else {
        let r = dominant_root(d, run_length);
        let ln_c = envelope_ln_c(&probs, run_length, r);
        entropy_envelope_tail(ln_c, r, n_max)
    };
    Ok(SeriesResult {
        partial_sum: Scalar::Real(partial),
        terms_used: n_max as usize + 1 - run_length,
        tail_bound: tail,
    })
}

fn entropy_envelope_tail(ln_c: f64, r: f64, n_max: u64) -> f64 {
    const MAX_TERMS: u64 = 1_000_000;
    let peak = std::f64::consts::LOG2_E / std::f64::consts::E;
    let mut total = 0.0;
    for m in n_max + 1..n_max + MAX_TERMS {
        let ln_u = ln_c + m as f64 * r.ln();
        let term = if ln_u <= -1.0 {
            -ln_u.exp() * ln_u / std::f64::consts::LN_2
        } else {
            peak
        };
        total += term;
        if ln_u <= -1.0 && term <= total * 1e-18 {
            break;
        }
    }
    total * BOUND_SLACK
}

/// Which consecutive ratio to form in [`golden_ratio_limit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioKind {
    /// `A_{n+1} / A_n` for the run of two ones at the end (`A_n = F_{n-1}`).
    Count,
    /// `P_{n+1} / P_n` for the same event on the fair coin.
    Prob,
    /// `A_{n+1} / A_n` with `A_n = (n·L_n - F_n) / 5`, run of two anywhere.
    AnywhereCount,
    /// `P_{n+1} / P_n` for the anywhere event on the fair coin.
    AnywhereProb,
}

/// Consecutive count or probability ratio; tends to `φ` (counts) or `φ/2`
/// (probabilities).
pub fn golden_ratio_limit(kind: RatioKind, n: u64) -> Result<f64> {
    if n > MAX_INDEX - 1 {
        return Err(Error::IndexOutOfRange {
            index: n as i64,
            cap: MAX_INDEX,
        });
    }
    let n = n as i64;
    let (num, den) = match kind {
        RatioKind::Count | RatioKind::Prob => (sequences::fibonacci(n)?, sequences::fibonacci(n - 1)?),
        RatioKind::AnywhereCount | RatioKind::AnywhereProb => {
            if n < 2 {
                return Err(Error::ZeroDenominator(format!("A_{n} = 0")));
            }
            (
                sequences::sum_product_identity(n + 1)?,
                sequences::sum_product_identity(n)?,
            )
        }
    };
    if den.is_zero() || n < 1 {
        return Err(Error::ZeroDenominator(format!("A_{n} = 0")));
    }
    let half = matches!(kind, RatioKind::Prob | RatioKind::AnywhereProb);
    let den = if half { den * 2 } else { den };
    Ok(rational_to_f64(&BigRational::new(num, den)))
}
