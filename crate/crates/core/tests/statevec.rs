mod common;

use common::{all_strings, naive_allowed};
use num_traits::ToPrimitive;
use qcoin_core::probability::prob_end_uniform;
use qcoin_core::statevec::*;
use qcoin_core::{CoinSpec, Complex64, PatternSpec, Position};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state(rng: &mut ChaCha8Rng, d: u8, n: usize) -> StateVector {
    let size = (d as usize).pow(n as u32);
    let raw: Vec<Complex64> = (0..size)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    StateVector::normalized(d, n, raw.into_iter().map(|c| c / norm).collect()).unwrap()
}

#[test]
fn projector_indices_are_allowed_labels() {
    for d in 2..=3u8 {
        for run in 1..=3 {
            for n in run..=7 {
                for pos in [Position::End, Position::Anywhere, Position::At(1)] {
                    let p = PatternSpec::new(d, d - 1, run, pos).unwrap();
                    let proj = build_projector(n, &p).unwrap();
                    let expect: Vec<usize> = all_strings(d, n)
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| naive_allowed(s, d - 1, run, pos))
                        .map(|(i, _)| i)
                        .collect();
                    assert_eq!(proj.indices(), expect.as_slice(), "d={d} N={run} n={n} {pos:?}");
                }
            }
        }
    }
}

#[test]
fn uniform_born_probability_recovers_dimension() {
    for d in 2..=4u8 {
        for run in 1..=3 {
            let max_n = if d == 2 { 16 } else { 9 };
            for n in run..=max_n {
                let proj = build_projector(n, &PatternSpec::ending(d, run).unwrap()).unwrap();
                let psi = uniform_state(d, n).unwrap();
                let b = born_probability(&psi, &proj).unwrap();
                let scaled = b * (d as f64).powi(n as i32);
                assert!((scaled - proj.dimension() as f64).abs() < 1e-9);
                let exact = prob_end_uniform(d as u64, run, n as u64).unwrap().to_f64().unwrap();
                assert!((b - exact).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn projection_is_idempotent_and_normalization_is_exact_masking() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let proj = build_projector(8, &PatternSpec::new(2, 1, 2, Position::Anywhere).unwrap()).unwrap();
    for _ in 0..10 {
        let psi = random_state(&mut rng, 2, 8);
        let once = project(&psi, &proj).unwrap();
        assert_eq!(project(&once, &proj).unwrap(), once);

        let out = project_and_normalize(&psi, &proj).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        for i in proj.complement().indices() {
            assert_eq!(out.amplitudes()[*i], Complex64::new(0.0, 0.0));
        }
    }
}

#[test]
fn born_probability_and_complement_sum_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (d, n) in [(2u8, 7usize), (3, 5)] {
        let proj = build_projector(n, &PatternSpec::ending(d, 2).unwrap()).unwrap();
        let comp = proj.complement();
        for _ in 0..10 {
            let psi = random_state(&mut rng, d, n);
            let b = born_probability(&psi, &proj).unwrap();
            assert!((0.0..=1.0).contains(&b));
            assert!((b - (1.0 - born_probability(&psi, &comp).unwrap())).abs() < 1e-12);
        }
    }
}

#[test]
fn sampling_is_independent_of_worker_count() {
    let coin = CoinSpec::real(vec![0.3, 0.7]).unwrap();
    let patterns = [
        PatternSpec::ending(2, 2).unwrap(),
        PatternSpec::new(2, 1, 2, Position::At(2)).unwrap(),
        PatternSpec::new(2, 1, 3, Position::Anywhere).unwrap(),
    ];
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sample_trials(&coin, 9, 50_000, &patterns, RngSpec::new(2024)).unwrap())
    };
    let single = run(1);
    assert_eq!(single, run(4));
    assert_eq!(single, run(7));
}

#[test]
fn monte_carlo_consistency() {
    for d in 2..=3u8 {
        let coin = CoinSpec::uniform(d as usize).unwrap();
        for n in [4usize, 6] {
            let pattern = PatternSpec::ending(d, 2).unwrap();
            let shots = 100_000;
            let got = sample_trials(&coin, n, shots, &[pattern], RngSpec::new(5)).unwrap();
            let p = prob_end_uniform(d as u64, 2, n as u64).unwrap().to_f64().unwrap();
            let sigma = (p * (1.0 - p) / shots as f64).sqrt();
            assert!((got.frequency(0) - p).abs() < 5.0 * sigma, "d={d} n={n}");
        }
    }
}

#[test]
fn basis_entropy_of_uniform_state_is_n_log_d() {
    for (d, n) in [(2u8, 10usize), (3, 6), (4, 5)] {
        let s = uniform_state(d, n).unwrap();
        assert!((s.basis_entropy() - n as f64 * (d as f64).log2()).abs() < 1e-9);
    }
}
