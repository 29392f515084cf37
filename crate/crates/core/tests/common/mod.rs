//! Naive reference implementations shared by the integration tests. None of
//! these call into the library; they exist to be obviously correct.

#![allow(dead_code)]

use qcoin_core::{BigInt, BigRational, Position};

/// Every length-`n` string over `0..d`, lexicographic.
pub fn all_strings(d: u8, n: usize) -> Vec<Vec<u8>> {
    let total = (d as u64).pow(n as u32);
    (0..total)
        .map(|mut i| {
            let mut s = vec![0u8; n];
            for slot in s.iter_mut().rev() {
                *slot = (i % d as u64) as u8;
                i /= d as u64;
            }
            s
        })
        .collect()
}

/// 1-based start positions of every occurrence of `t^run` in `s`.
pub fn occurrences(s: &[u8], t: u8, run: usize) -> Vec<usize> {
    if s.len() < run {
        return Vec::new();
    }
    s.windows(run)
        .enumerate()
        .filter(|(_, w)| w.iter().all(|&c| c == t))
        .map(|(i, _)| i + 1)
        .collect()
}

pub fn naive_allowed(s: &[u8], t: u8, run: usize, pos: Position) -> bool {
    let occ = occurrences(s, t, run);
    if occ.len() != 1 {
        return false;
    }
    match pos {
        Position::Anywhere => true,
        Position::End => occ[0] + run == s.len() + 1,
        Position::At(k) => occ[0] == k,
    }
}

pub fn naive_count(d: u8, n: usize, t: u8, run: usize, pos: Position) -> u64 {
    all_strings(d, n)
        .iter()
        .filter(|s| naive_allowed(s, t, run, pos))
        .count() as u64
}

/// Σ over allowed strings of Π p_{s_i}, by direct multiplication.
pub fn naive_weighted(n: usize, t: u8, run: usize, pos: Position, probs: &[BigRational]) -> BigRational {
    let d = probs.len() as u8;
    all_strings(d, n)
        .iter()
        .filter(|s| naive_allowed(s, t, run, pos))
        .map(|s| s.iter().map(|&c| probs[c as usize].clone()).product::<BigRational>())
        .sum()
}

/// Fibonacci by plain u128 iteration; valid for n ≤ 185.
pub fn fib(n: u64) -> u128 {
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 0..n {
        let next = a + b;
        a = b;
        b = next;
    }
    a
}

/// Lucas by plain u128 iteration; valid for n ≤ 183.
pub fn luc(n: u64) -> u128 {
    let (mut a, mut b) = (2u128, 1u128);
    for _ in 0..n {
        let next = a + b;
        a = b;
        b = next;
    }
    a
}

/// Terms `0..=upto` of `x_k = m·(x_{k-1} + … + x_{k-run})`, zeros then a one.
pub fn multiplier_sequence(run: usize, m: u64, upto: usize) -> Vec<BigInt> {
    let mut x: Vec<BigInt> = (0..run).map(|i| BigInt::from((i + 1 == run) as u8)).collect();
    while x.len() <= upto {
        let k = x.len();
        let s: BigInt = x[k - run..].iter().sum();
        x.push(s * m);
    }
    x.truncate(upto + 1);
    x
}

pub fn big(v: u128) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}
