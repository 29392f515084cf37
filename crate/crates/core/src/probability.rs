//! Closed forms and recursions for pattern probabilities.
//!
//! Uniform coins get exact closed forms (`G_{n-1} / d^n`). Generic coins use
//! the N-Bonacci polynomial recursion in the target probability `p_t`, which
//! stays exact for rational coins and runs in binary64 for real ones.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Num, Zero};

use crate::coin::{CoinSpec, Scalar};
use crate::error::{Error, Result};
use crate::sequences::{self, gen_nbonacci, SequenceParams, MAX_INDEX};

const SUPERPOSITION_NORM_TOL: f64 = 1e-12;

fn pow_int(base: u64, exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

fn check_trials(n: u64) -> Result<()> {
    if n > MAX_INDEX {
        Err(Error::IndexOutOfRange {
            index: n as i64,
            cap: MAX_INDEX,
        })
    } else {
        Ok(())
    }
}

/// Probability that `n` trials of the fair `d`-sided coin end in exactly one
/// run of `N` targets: `G_{n-1} / d^n` with `G` the `(N, d-1)` sequence.
/// Zero when `n < N`.
pub fn prob_end_uniform(d: u64, run_length: usize, n: u64) -> Result<BigRational> {
    let params = SequenceParams::for_alphabet(run_length, d)?;
    check_trials(n)?;
    if n < run_length as u64 {
        return Ok(BigRational::zero());
    }
    let count = gen_nbonacci(params, n - 1)?;
    Ok(BigRational::new(count, pow_int(d, n)))
}

/// `P_0 ..= P_upto` of the recursion
/// `P_n = (1 - p)·Σ_{j=1}^{N} p^{j-1} P_{n-j}`, `P_N = p^N`, lower terms zero.
pub fn end_recursion<T>(p: &T, run_length: usize, upto: usize) -> Vec<T>
where
    T: Clone + Num,
{
    let q = T::one() - p.clone();
    let mut powers = Vec::with_capacity(run_length + 1);
    powers.push(T::one());
    for j in 1..=run_length {
        powers.push(powers[j - 1].clone() * p.clone());
    }
    let mut out: Vec<T> = Vec::with_capacity(upto + 1);
    for n in 0..=upto {
        let value = if n < run_length || n == 0 {
            T::zero()
        } else if n == run_length {
            powers[run_length].clone()
        } else {
            let mut acc = T::zero();
            for j in 1..=run_length {
                acc = acc + powers[j - 1].clone() * out[n - j].clone();
            }
            q.clone() * acc
        };
        out.push(value);
    }
    out
}

/// Generic-coin probability of ending in exactly one run of `N` copies of `target`.
pub fn prob_end_generic(coin: &CoinSpec, target: usize, run_length: usize, n: u64) -> Result<Scalar> {
    coin.check_symbol(target)?;
    if run_length < 1 {
        return Err(Error::InvalidParams("run length N must be >= 1".into()));
    }
    check_trials(n)?;
    let n = n as usize;
    Ok(match coin {
        CoinSpec::Exact(probs) => {
            Scalar::Exact(end_recursion(&probs[target], run_length, n).swap_remove(n))
        }
        CoinSpec::Real(probs) => Scalar::Real(end_recursion(&probs[target], run_length, n)[n]),
    })
}

fn check_position(run_length: usize, n: u64, k: u64) -> Result<()> {
    if run_length < 2 {
        return Err(Error::InvalidParams("positional run length N must be >= 2".into()));
    }
    check_trials(n)?;
    let max = (n + 1).saturating_sub(run_length as u64);
    if k < 1 || k > max {
        return Err(Error::PositionOutOfRange {
            k: k as usize,
            max: max as usize,
        });
    }
    Ok(())
}

/// Fair-qubit probability that the only run of `N` ones starts at position `k`:
/// `B_{k+N-2} · B_{n-k} / 2^n`.
pub fn prob_position(run_length: usize, n: u64, k: u64) -> Result<BigRational> {
    check_position(run_length, n, k)?;
    let terms = sequences::gen_nbonacci_terms(SequenceParams::nbonacci(run_length)?, n)?;
    let left = &terms[(k as usize) + run_length - 2];
    let right = &terms[(n - k) as usize];
    Ok(BigRational::new(left * right, pow_int(2, n)))
}

/// Lucas form of the `N = 2` positional probability,
/// `(L_n - (-1)^k L_{n-2k}) / (5·2^n)`.
pub fn prob_position_lucas(n: u64, k: u64) -> Result<BigRational> {
    check_position(2, n, k)?;
    let (n, k) = (n as i64, k as i64);
    let lead = sequences::lucas(n)?;
    let tail = sequences::lucas(n - 2 * k)?;
    let numerator = if k % 2 == 0 { lead - tail } else { lead + tail };
    Ok(BigRational::new(numerator, BigInt::from(5) * pow_int(2, n as u64)))
}

/// Fair-qubit probability that a run of `N` ones occurs exactly once, anywhere.
pub fn prob_anywhere(run_length: usize, n: u64) -> Result<BigRational> {
    if run_length < 2 {
        return Err(Error::InvalidParams("positional run length N must be >= 2".into()));
    }
    check_trials(n)?;
    if n < run_length as u64 {
        return Ok(BigRational::zero());
    }
    let terms = sequences::gen_nbonacci_terms(SequenceParams::nbonacci(run_length)?, n)?;
    let count: BigInt = (1..=n - run_length as u64 + 1)
        .map(|k| &terms[k as usize + run_length - 2] * &terms[(n - k) as usize])
        .sum();
    Ok(BigRational::new(count, pow_int(2, n)))
}

/// `(n·L_n - F_n) / (5·2^n)`: the `N = 2` anywhere probability via Lucas numbers.
pub fn prob_anywhere_lucas(n: u64) -> Result<BigRational> {
    check_trials(n)?;
    if n < 2 {
        return Ok(BigRational::zero());
    }
    let n = n as i64;
    let numerator = BigInt::from(n) * sequences::lucas(n)? - sequences::fibonacci(n)?;
    Ok(BigRational::new(numerator, BigInt::from(5) * pow_int(2, n as u64)))
}

/// A qubit on the Bloch sphere, `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    pub theta: f64,
    pub phi: f64,
}

impl BlochState {
    /// Measurement probabilities `((1 + cos θ)/2, (1 - cos θ)/2)`. The phase
    /// never enters.
    pub fn coin(&self) -> CoinSpec {
        let c = self.theta.cos();
        CoinSpec::Real(vec![(1.0 + c) / 2.0, (1.0 - c) / 2.0])
    }
}

pub fn bloch_coin(theta: f64, phi: f64) -> CoinSpec {
    BlochState { theta, phi }.coin()
}

/// Probability of the run of `N` ones ending `n` trials of a Bloch-sphere qubit.
pub fn prob_end_bloch(theta: f64, run_length: usize, n: u64) -> Result<f64> {
    Ok(prob_end_generic(&bloch_coin(theta, 0.0), 1, run_length, n)?.to_f64())
}

/// Outcome probabilities of `α|+⟩ + β|−⟩` measured in the computational basis.
pub fn superposition_probs(alpha: Complex64, beta: Complex64) -> Result<(f64, f64)> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > SUPERPOSITION_NORM_TOL {
        return Err(Error::InvalidCoin(format!("|α|² + |β|² = {norm}")));
    }
    let cross = (alpha * beta.conj()).re.clamp(-0.5, 0.5);
    Ok((0.5 + cross, 0.5 - cross))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::ratio;
    use std::f64::consts::PI;
    use num_traits::One;

    #[test]
    fn uniform_examples() {
        assert_eq!(prob_end_uniform(2, 2, 6).unwrap(), ratio(5, 64));
        assert_eq!(prob_end_uniform(3, 2, 3).unwrap(), ratio(2, 27));
        assert_eq!(prob_end_uniform(4, 2, 3).unwrap(), ratio(3, 64));
        assert_eq!(prob_end_uniform(2, 3, 2).unwrap(), ratio(0, 1));
        assert_eq!(prob_end_uniform(3, 3, 3).unwrap(), ratio(1, 27));
        assert!(prob_end_uniform(1, 2, 3).is_err());
    }

    #[test]
    fn qudit_uniform_initial_values() {
        for d in 2u64..8 {
            let di = d as i64;
            assert_eq!(prob_end_uniform(d, 2, 2).unwrap(), ratio(1, di * di));
            assert_eq!(prob_end_uniform(d, 2, 3).unwrap(), ratio(di - 1, di.pow(3)));
            assert_eq!(prob_end_uniform(d, 3, 4).unwrap(), ratio(di - 1, di.pow(4)));
        }
    }

    #[test]
    fn generic_examples() {
        let coin = CoinSpec::exact(vec![ratio(1, 3), ratio(2, 3)]).unwrap();
        assert_eq!(prob_end_generic(&coin, 1, 2, 4).unwrap(), Scalar::Exact(ratio(4, 27)));
        assert_eq!(prob_end_generic(&coin, 1, 2, 3).unwrap(), Scalar::Exact(ratio(4, 27)));
        let fair = CoinSpec::uniform(2).unwrap();
        assert_eq!(prob_end_generic(&fair, 1, 3, 7).unwrap(), Scalar::Exact(ratio(7, 128)));
        let real = CoinSpec::real(vec![0.5, 0.5]).unwrap();
        assert_eq!(prob_end_generic(&real, 1, 3, 7).unwrap(), Scalar::Real(7.0 / 128.0));
        assert!(prob_end_generic(&fair, 2, 2, 4).is_err());
    }

    #[test]
    fn qudit_generic_initial_values() {
        // P_2 = p_k², P_3 = p_k²(1 - p_k) for any target k.
        let coin = CoinSpec::exact(vec![ratio(1, 5), ratio(1, 10), ratio(3, 10), ratio(2, 5)]).unwrap();
        for k in 0..4 {
            let CoinSpec::Exact(p) = &coin else { unreachable!() };
            let pk = p[k].clone();
            let one = BigRational::one();
            assert_eq!(prob_end_generic(&coin, k, 2, 2).unwrap(), Scalar::Exact(&pk * &pk));
            assert_eq!(
                prob_end_generic(&coin, k, 2, 3).unwrap(),
                Scalar::Exact(&pk * &pk * (&one - &pk))
            );
            assert_eq!(
                prob_end_generic(&coin, k, 3, 4).unwrap(),
                Scalar::Exact(&pk * &pk * &pk * (&one - &pk))
            );
        }
    }

    #[test]
    fn position_examples() {
        assert_eq!(prob_position(2, 5, 2).unwrap(), ratio(2, 32));
        assert_eq!(prob_position(2, 3, 2).unwrap(), ratio(1, 8));
        assert_eq!(prob_position(3, 6, 1).unwrap(), ratio(4, 64));
        assert_eq!(prob_position_lucas(5, 2).unwrap(), ratio(2, 32));
        assert!(matches!(prob_position(2, 5, 5), Err(Error::PositionOutOfRange { .. })));
        assert!(matches!(prob_position(2, 5, 0), Err(Error::PositionOutOfRange { .. })));
        assert!(prob_position(1, 5, 1).is_err());
    }

    #[test]
    fn end_position_matches_end_probability() {
        for big_n in 2..5usize {
            for n in big_n as u64..20 {
                let k = n + 1 - big_n as u64;
                assert_eq!(prob_position(big_n, n, k).unwrap(), prob_end_uniform(2, big_n, n).unwrap());
                assert_eq!(prob_position(big_n, n, 1).unwrap(), prob_end_uniform(2, big_n, n).unwrap());
            }
        }
    }

    #[test]
    fn anywhere_examples() {
        assert_eq!(prob_anywhere(2, 4).unwrap(), ratio(5, 16));
        assert_eq!(prob_anywhere(2, 2).unwrap(), ratio(1, 4));
        assert_eq!(prob_anywhere(3, 5).unwrap(), ratio(5, 32));
        assert_eq!(prob_anywhere_lucas(4).unwrap(), ratio(5, 16));
        assert_eq!(prob_anywhere(3, 2).unwrap(), ratio(0, 1));
    }

    #[test]
    fn bloch_examples() {
        let coin = bloch_coin(PI / 2.0, 1.3).to_f64();
        assert!(coin.iter().all(|p| (p - 0.5).abs() < 1e-15));
        assert_eq!(bloch_coin(0.0, 0.0).to_f64(), [1.0, 0.0]);
        let third = bloch_coin(2.0 * PI / 3.0, 0.0).to_f64();
        assert!((third[0] - 0.25).abs() < 1e-15 && (third[1] - 0.75).abs() < 1e-15);

        assert_eq!(prob_end_bloch(PI, 2, 2).unwrap(), 1.0);
        assert!((prob_end_bloch(PI / 2.0, 2, 3).unwrap() - 0.125).abs() < 1e-15);
        assert!((prob_end_bloch(PI / 2.0, 3, 4).unwrap() - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn bloch_is_phase_free() {
        for phi in [0.0, 0.4, PI, 5.0] {
            assert_eq!(bloch_coin(1.1, phi), bloch_coin(1.1, 0.0));
        }
    }

    #[test]
    fn superposition_examples() {
        let c = Complex64::new;
        assert_eq!(superposition_probs(c(1.0, 0.0), c(0.0, 0.0)).unwrap(), (0.5, 0.5));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (p0, p1) = superposition_probs(c(h, 0.0), c(h, 0.0)).unwrap();
        assert!((p0 - 1.0).abs() < 1e-15 && p1.abs() < 1e-15);
        let g: f64 = 0.7;
        let (p0, p1) = superposition_probs(c(g.cos(), 0.0), c(0.0, g.sin())).unwrap();
        assert!((p0 - 0.5).abs() < 1e-15 && (p1 - 0.5).abs() < 1e-15);
        assert!(superposition_probs(c(1.0, 0.0), c(1.0, 0.0)).is_err());
    }
}
