//! Dense state vectors over `d^n` computational basis states, diagonal tree
//! projectors, and a seeded sequential-measurement sampler.
//!
//! Basis index `i` is the base-`d` reading of the label with the leftmost
//! symbol most significant, so `|0011⟩` is index 3.

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coin::CoinSpec;
use crate::error::{Error, Result};
use crate::patterns::{self, checked_space, PatternSpec};

/// Largest number of amplitudes a state vector may hold.
pub const STATE_BUDGET: u64 = 1 << 22;

const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    d: u8,
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps raw amplitudes; the length must be exactly `d^n`. No
    /// normalization is imposed (projected states are not normalized).
    pub fn from_amplitudes(d: u8, n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParams(format!("alphabet size d = {d} must be >= 2")));
        }
        let size = checked_space(d as u64, n, STATE_BUDGET)?;
        if amplitudes.len() as u64 != size {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {d}^{n} = {size} basis states",
                amplitudes.len()
            )));
        }
        Ok(Self { d, n, amplitudes })
    }

    /// Like [`from_amplitudes`](Self::from_amplitudes) but insists on unit norm.
    pub fn normalized(d: u8, n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self::from_amplitudes(d, n, amplitudes)?;
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParams(format!("state has squared norm {norm}")));
        }
        Ok(state)
    }

    /// Sparse real amplitudes on the given basis indices, zero elsewhere.
    pub fn from_sparse(d: u8, n: usize, entries: &[(usize, Complex64)]) -> Result<Self> {
        let size = checked_space(d as u64, n, STATE_BUDGET)? as usize;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); size];
        for &(i, c) in entries {
            let slot = amplitudes.get_mut(i).ok_or_else(|| {
                Error::DimensionMismatch(format!("basis index {i} >= {size}"))
            })?;
            *slot = c;
        }
        Self::from_amplitudes(d, n, amplitudes)
    }

    pub fn d(&self) -> u8 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// Shannon entropy in bits of the outcome distribution `|c_i|²`.
    pub fn basis_entropy(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(Complex64::norm_sqr)
            .filter(|p| *p > 0.0)
            .map(|p| -p * p.log2())
            .sum()
    }
}

/// The maximally random `n`-qudit state: every amplitude `1/√(d^n)`.
pub fn uniform_state(d: u8, n: usize) -> Result<StateVector> {
    let size = checked_space(d as u64, n, STATE_BUDGET)?;
    let amp = Complex64::new(1.0 / (size as f64).sqrt(), 0.0);
    StateVector::from_amplitudes(d, n, vec![amp; size as usize])
}

/// Diagonal 0/1 projector onto the span of allowed basis states, stored as
/// the sorted set of basis indices it keeps.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeProjector {
    d: u8,
    n: usize,
    pattern: Option<PatternSpec>,
    indices: Vec<usize>,
}

impl TreeProjector {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn dimension(&self) -> usize {
        self.indices.len()
    }

    pub fn d(&self) -> u8 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The pattern this projector was built from; `None` for complements.
    pub fn pattern(&self) -> Option<&PatternSpec> {
        self.pattern.as_ref()
    }

    /// `1 - P`, the projector onto every other basis state.
    pub fn complement(&self) -> TreeProjector {
        let size = (self.d as usize).pow(self.n as u32);
        let mut kept = self.indices.iter().peekable();
        let indices = (0..size)
            .filter(|i| {
                if kept.peek() == Some(&i) {
                    kept.next();
                    false
                } else {
                    true
                }
            })
            .collect();
        TreeProjector {
            d: self.d,
            n: self.n,
            pattern: None,
            indices,
        }
    }

    fn check(&self, psi: &StateVector) -> Result<()> {
        if psi.d != self.d || psi.n != self.n {
            return Err(Error::DimensionMismatch(format!(
                "state over {}^{} but projector over {}^{}",
                psi.d, psi.n, self.d, self.n
            )));
        }
        Ok(())
    }
}

/// Projector onto the allowed strings of length `n` for `pattern`.
pub fn build_projector(n: usize, pattern: &PatternSpec) -> Result<TreeProjector> {
    checked_space(pattern.alphabet() as u64, n, STATE_BUDGET)?;
    let indices = patterns::allowed_strings(n, pattern)?
        .map(|s| s.basis_index() as usize)
        .collect();
    Ok(TreeProjector {
        d: pattern.alphabet(),
        n,
        pattern: Some(*pattern),
        indices,
    })
}

/// `⟨ψ|P|ψ⟩ = Σ_{i ∈ P} |c_i|²`.
pub fn born_probability(psi: &StateVector, projector: &TreeProjector) -> Result<f64> {
    projector.check(psi)?;
    Ok(projector
        .indices
        .iter()
        .map(|&i| psi.amplitudes[i].norm_sqr())
        .sum())
}

/// `P|ψ⟩`, without renormalizing.
pub fn project(psi: &StateVector, projector: &TreeProjector) -> Result<StateVector> {
    projector.check(psi)?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); psi.amplitudes.len()];
    for &i in &projector.indices {
        amplitudes[i] = psi.amplitudes[i];
    }
    StateVector::from_amplitudes(psi.d, psi.n, amplitudes)
}

/// `P|ψ⟩ / ‖P|ψ⟩‖`, the post-measurement state inside the tree subspace.
pub fn project_and_normalize(psi: &StateVector, projector: &TreeProjector) -> Result<StateVector> {
    let mut projected = project(psi, projector)?;
    let prob = projected.norm_sqr();
    if prob <= 0.0 {
        return Err(Error::ZeroProbability);
    }
    let scale = 1.0 / prob.sqrt();
    for &i in &projector.indices {
        projected.amplitudes[i] *= scale;
    }
    Ok(projected)
}

/// Seed for [`sample_trials`].
///
/// The generator is ChaCha8. Shot `i` draws from stream `i` of the
/// generator keyed by `seed`, so results do not depend on how shots are
/// split across worker threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSpec {
    pub seed: u64,
}

impl RngSpec {
    pub const ALGORITHM: &'static str = "chacha8-stream-per-shot";

    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    fn shot_rng(&self, shot: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(shot);
        rng
    }
}

/// Event counts from [`sample_trials`], one per requested pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleCounts {
    pub shots: u64,
    pub counts: Vec<u64>,
}

impl SampleCounts {
    pub fn frequency(&self, pattern: usize) -> f64 {
        self.counts[pattern] as f64 / self.shots as f64
    }
}

const SHOTS_PER_TASK: u64 = 4096;

/// Draws `shots` length-`n` strings with i.i.d. symbols from `coin` and counts
/// how many satisfy each pattern.
pub fn sample_trials(
    coin: &CoinSpec,
    n: usize,
    shots: u64,
    patterns: &[PatternSpec],
    rng: RngSpec,
) -> Result<SampleCounts> {
    if shots < 1 {
        return Err(Error::InvalidParams("shots must be >= 1".into()));
    }
    if n < 1 {
        return Err(Error::InvalidParams("strings must have length >= 1".into()));
    }
    for p in patterns {
        if p.alphabet() as usize != coin.d() {
            return Err(Error::InvalidParams(format!(
                "pattern alphabet {} differs from coin size {}",
                p.alphabet(),
                coin.d()
            )));
        }
        if let crate::patterns::Position::At(k) = p.position() {
            let max = (n + 1).saturating_sub(p.run_length());
            if k > max {
                return Err(Error::PositionOutOfRange { k, max });
            }
        }
    }
    let weights = coin.to_f64();
    let sampler = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidCoin(format!("cannot sample coin: {e}")))?;
    let admits: Vec<bool> = patterns.iter().map(|p| n >= p.run_length()).collect();

    let tasks = shots.div_ceil(SHOTS_PER_TASK);
    let counts = (0..tasks)
        .into_par_iter()
        .map(|task| {
            let mut counts = vec![0u64; patterns.len()];
            let mut buf = vec![0u8; n];
            let first = task * SHOTS_PER_TASK;
            for shot in first..(first + SHOTS_PER_TASK).min(shots) {
                let mut rng = rng.shot_rng(shot);
                for slot in buf.iter_mut() {
                    *slot = sampler.sample(&mut rng) as u8;
                }
                for ((count, p), ok) in counts.iter_mut().zip(patterns).zip(&admits) {
                    if *ok && p.matches(&buf) {
                        *count += 1;
                    }
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; patterns.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(SampleCounts { shots, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::ratio;
    use crate::patterns::Position;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn end(d: u8, big_n: usize) -> PatternSpec {
        PatternSpec::ending(d, big_n).unwrap()
    }

    #[test]
    fn uniform_examples() {
        let s = uniform_state(2, 2).unwrap();
        assert!(s.amplitudes().iter().all(|a| *a == c(0.5)));
        let s = uniform_state(2, 10).unwrap();
        assert!((s.basis_entropy() - 10.0).abs() < 1e-9);
        let s = uniform_state(3, 1).unwrap();
        assert!(s.amplitudes().iter().all(|a| (a.norm_sqr() - 1.0 / 3.0).abs() < 1e-15));
        assert!(matches!(uniform_state(2, 23), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn projector_examples() {
        assert_eq!(build_projector(4, &end(2, 2)).unwrap().indices(), [3, 11]);
        let p5 = build_projector(5, &end(2, 2)).unwrap();
        assert_eq!(p5.indices(), [3, 11, 19]);
        assert_eq!(p5.dimension(), 3);
        assert_eq!(build_projector(5, &end(2, 3)).unwrap().indices(), [7, 23]);
    }

    #[test]
    fn born_examples() {
        let p = build_projector(5, &end(2, 2)).unwrap();
        let b = born_probability(&uniform_state(2, 5).unwrap(), &p).unwrap();
        assert!((b - 3.0 / 32.0).abs() < 1e-12);

        let psi = StateVector::from_sparse(2, 4, &[(3, c(0.6)), (11, c(0.8))]).unwrap();
        let p4 = build_projector(4, &end(2, 2)).unwrap();
        assert!((born_probability(&psi, &p4).unwrap() - 1.0).abs() < 1e-12);

        let p7 = build_projector(7, &end(2, 3)).unwrap();
        let b = born_probability(&uniform_state(2, 7).unwrap(), &p7).unwrap();
        assert!((b - 7.0 / 128.0).abs() < 1e-12);

        assert!(matches!(
            born_probability(&uniform_state(2, 6).unwrap(), &p7),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn normalize_examples() {
        let p5 = build_projector(5, &end(2, 2)).unwrap();
        let out = project_and_normalize(&uniform_state(2, 5).unwrap(), &p5).unwrap();
        for (i, a) in out.amplitudes().iter().enumerate() {
            if [3, 11, 19].contains(&i) {
                assert!((a.re - 1.0 / 3f64.sqrt()).abs() < 1e-12);
            } else {
                assert_eq!(*a, c(0.0));
            }
        }

        let p2 = build_projector(2, &end(2, 2)).unwrap();
        let out = project_and_normalize(&uniform_state(2, 2).unwrap(), &p2).unwrap();
        assert_eq!(out.amplitudes(), [c(0.0), c(0.0), c(0.0), c(1.0)]);

        let psi = StateVector::from_sparse(2, 4, &[(3, c(0.6)), (11, c(0.8))]).unwrap();
        let p4 = build_projector(4, &end(2, 2)).unwrap();
        let out = project_and_normalize(&psi, &p4).unwrap();
        assert!((out.amplitudes()[3].re - 0.6).abs() < 1e-15);
        assert!((out.amplitudes()[11].re - 0.8).abs() < 1e-15);

        let outside = StateVector::from_sparse(2, 4, &[(0, c(1.0))]).unwrap();
        assert_eq!(project_and_normalize(&outside, &p4), Err(Error::ZeroProbability));
    }

    #[test]
    fn complement_partitions_basis() {
        let p = build_projector(5, &end(2, 2)).unwrap();
        let q = p.complement();
        assert_eq!(p.dimension() + q.dimension(), 32);
        assert!(q.indices().iter().all(|i| !p.indices().contains(i)));
    }

    #[test]
    fn sampler_edge_cases() {
        let always_one = CoinSpec::exact(vec![ratio(0, 1), ratio(1, 1)]).unwrap();
        let got = sample_trials(&always_one, 3, 500, &[end(2, 3)], RngSpec::new(1)).unwrap();
        assert_eq!(got.counts, [500]);

        let always_zero = CoinSpec::exact(vec![ratio(1, 1), ratio(0, 1)]).unwrap();
        let patterns = [
            end(2, 2),
            PatternSpec::new(2, 1, 2, Position::Anywhere).unwrap(),
            PatternSpec::new(2, 1, 2, Position::At(2)).unwrap(),
        ];
        let got = sample_trials(&always_zero, 6, 500, &patterns, RngSpec::new(1)).unwrap();
        assert_eq!(got.counts, [0, 0, 0]);

        // A run longer than the string never occurs.
        let fair = CoinSpec::uniform(2).unwrap();
        let got = sample_trials(&fair, 2, 100, &[end(2, 3)], RngSpec::new(9)).unwrap();
        assert_eq!(got.counts, [0]);

        assert!(sample_trials(&fair, 4, 0, &[end(2, 2)], RngSpec::new(1)).is_err());
        assert!(sample_trials(&fair, 4, 10, &[end(3, 2)], RngSpec::new(1)).is_err());
    }

    #[test]
    fn sampler_is_deterministic() {
        let fair = CoinSpec::uniform(2).unwrap();
        let a = sample_trials(&fair, 6, 20_000, &[end(2, 2)], RngSpec::new(42)).unwrap();
        let b = sample_trials(&fair, 6, 20_000, &[end(2, 2)], RngSpec::new(42)).unwrap();
        let other = sample_trials(&fair, 6, 20_000, &[end(2, 2)], RngSpec::new(43)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, other);
    }
}
