//! Arbitrary-precision Fibonacci, Lucas and N-Bonacci sequences.
//!
//! Every value is computed by iterating its recurrence over a sliding window,
//! so results are exact for every supported index. Indices are capped at
//! [`MAX_INDEX`]; larger requests are rejected rather than truncated.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest absolute index accepted by the sequence functions.
pub const MAX_INDEX: u64 = 10_000;

/// Selects one generalized N-Bonacci sequence: run length `N` and multiplier `m`.
///
/// The sequence is `G_0 = … = G_{N-2} = 0`, `G_{N-1} = 1` and
/// `G_n = m·(G_{n-1} + … + G_{n-N})`. With `m = d - 1` it counts the strings
/// over a `d`-letter alphabet that end in exactly one run of `N` targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SequenceParams {
    run_length: usize,
    multiplier: u64,
}

impl SequenceParams {
    pub fn new(run_length: usize, multiplier: u64) -> Result<Self> {
        if run_length < 1 {
            return Err(Error::InvalidParams("run length N must be >= 1".into()));
        }
        if multiplier < 1 {
            return Err(Error::InvalidParams("multiplier m must be >= 1".into()));
        }
        Ok(Self {
            run_length,
            multiplier,
        })
    }

    /// Plain N-Bonacci numbers (`m = 1`).
    pub fn nbonacci(run_length: usize) -> Result<Self> {
        Self::new(run_length, 1)
    }

    /// The sequence counting allowed strings over a `d`-letter alphabet.
    pub fn for_alphabet(run_length: usize, d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParams(format!("alphabet size d = {d} must be >= 2")));
        }
        Self::new(run_length, d - 1)
    }

    pub fn run_length(&self) -> usize {
        self.run_length
    }

    pub fn multiplier(&self) -> u64 {
        self.multiplier
    }
}

fn check_index(n: i64) -> Result<()> {
    if n.unsigned_abs() > MAX_INDEX {
        Err(Error::IndexOutOfRange {
            index: n,
            cap: MAX_INDEX,
        })
    } else {
        Ok(())
    }
}

/// Walks a two-term additive recurrence forward from `(a_0, a_1)` to index `n >= 0`.
fn two_term(a0: i64, a1: i64, n: u64) -> BigInt {
    let mut prev = BigInt::from(a0);
    let mut cur = BigInt::from(a1);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &prev + &cur;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Fibonacci number `F_n`, with `F_{-k} = (-1)^{k+1} F_k` for negative indices.
pub fn fibonacci(n: i64) -> Result<BigInt> {
    check_index(n)?;
    let k = n.unsigned_abs();
    let value = two_term(0, 1, k);
    Ok(if n < 0 && k.is_multiple_of(2) { -value } else { value })
}

/// Lucas number `L_n` (`L_0 = 2`, `L_1 = 1`), with `L_{-k} = (-1)^k L_k`.
pub fn lucas(n: i64) -> Result<BigInt> {
    check_index(n)?;
    let k = n.unsigned_abs();
    let value = two_term(2, 1, k);
    Ok(if n < 0 && k % 2 == 1 { -value } else { value })
}

/// `G_0 ..= G_upto` of the generalized N-Bonacci sequence.
pub fn gen_nbonacci_terms(params: SequenceParams, upto: u64) -> Result<Vec<BigInt>> {
    if upto > MAX_INDEX {
        return Err(Error::IndexOutOfRange {
            index: upto as i64,
            cap: MAX_INDEX,
        });
    }
    let big_n = params.run_length;
    let m = BigInt::from(params.multiplier);
    let len = upto as usize + 1;
    let mut out = Vec::with_capacity(len);
    // Window of the last N terms and its running sum.
    let mut window: VecDeque<BigInt> = VecDeque::with_capacity(big_n);
    let mut sum = BigInt::zero();
    for i in 0..len {
        let value = if i + 1 < big_n {
            BigInt::zero()
        } else if i + 1 == big_n {
            BigInt::one()
        } else {
            &m * &sum
        };
        sum += &value;
        window.push_back(value.clone());
        if window.len() > big_n {
            let dropped = window.pop_front().expect("window is non-empty");
            sum -= dropped;
        }
        out.push(value);
    }
    Ok(out)
}

/// Generalized N-Bonacci number `G_n` for the given run length and multiplier.
pub fn gen_nbonacci(params: SequenceParams, n: u64) -> Result<BigInt> {
    let mut terms = gen_nbonacci_terms(params, n)?;
    Ok(terms.pop().expect("at least one term"))
}

/// Tribonacci number with `T_0 = T_1 = 0`, `T_2 = 1`.
pub fn tribonacci(n: u64) -> Result<BigInt> {
    gen_nbonacci(SequenceParams::nbonacci(3)?, n)
}

/// N-Bonacci number `B_n` with `B_0 = … = B_{N-2} = 0`, `B_{N-1} = 1`.
pub fn nbonacci(run_length: usize, n: u64) -> Result<BigInt> {
    gen_nbonacci(SequenceParams::nbonacci(run_length)?, n)
}

fn exact_div(value: BigInt, divisor: u32, what: &'static str) -> Result<BigInt> {
    let (q, r) = value.div_rem(&BigInt::from(divisor));
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::InexactDivision { what, divisor })
    }
}

/// `(L_{m+n} - (-1)^n L_{m-n}) / 5`, which equals `F_m · F_n`.
pub fn lucas_product_identity(m: i64, n: i64) -> Result<BigInt> {
    if m < 1 || n < 1 {
        return Err(Error::InvalidParams("m and n must be >= 1".into()));
    }
    let sum = m.checked_add(n).ok_or(Error::IndexOutOfRange {
        index: i64::MAX,
        cap: MAX_INDEX,
    })?;
    let lead = lucas(sum)?;
    let tail = lucas(m - n)?;
    let numerator = if n % 2 == 0 { lead - tail } else { lead + tail };
    exact_div(numerator, 5, "lucas_product_identity")
}

/// `(n·L_n - F_n) / 5`, which equals `Σ_{k=1}^{n-1} F_k · F_{n-k}`.
pub fn sum_product_identity(n: i64) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::InvalidParams("n must be >= 2".into()));
    }
    let numerator = BigInt::from(n) * lucas(n)? - fibonacci(n)?;
    exact_div(numerator, 5, "sum_product_identity")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn fibonacci_examples() {
        assert_eq!(fibonacci(6).unwrap(), int(8));
        assert_eq!(fibonacci(0).unwrap(), int(0));
        assert_eq!(fibonacci(-1).unwrap(), int(1));
        assert_eq!(fibonacci(-2).unwrap(), int(-1));
        assert_eq!(fibonacci(-6).unwrap(), int(-8));
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas(4).unwrap(), int(7));
        assert_eq!(lucas(0).unwrap(), int(2));
        assert_eq!(lucas(-1).unwrap(), int(-1));
        assert_eq!(lucas(-2).unwrap(), int(3));
    }

    #[test]
    fn negative_indices_satisfy_recursion() {
        for n in -40i64..40 {
            assert_eq!(fibonacci(n + 2).unwrap(), fibonacci(n + 1).unwrap() + fibonacci(n).unwrap());
            assert_eq!(lucas(n + 2).unwrap(), lucas(n + 1).unwrap() + lucas(n).unwrap());
        }
    }

    #[test]
    fn index_cap_is_enforced() {
        assert!(fibonacci(10_000).is_ok());
        assert!(fibonacci(-10_000).is_ok());
        assert!(matches!(fibonacci(10_001), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(lucas(-10_001), Err(Error::IndexOutOfRange { .. })));
        let p = SequenceParams::nbonacci(2).unwrap();
        assert!(gen_nbonacci(p, 10_000).is_ok());
        assert!(gen_nbonacci(p, 10_001).is_err());
    }

    #[test]
    fn large_index_has_known_digits() {
        // F_1000 has 209 decimal digits.
        let f = fibonacci(1000).unwrap().to_string();
        assert_eq!(f.len(), 209);
        assert!(f.starts_with("43466557686937456435688527675040625802564"));
    }

    #[test]
    fn gen_nbonacci_examples() {
        let trib = SequenceParams::new(3, 1).unwrap();
        assert_eq!(gen_nbonacci(trib, 7).unwrap(), int(13));
        let qutrit = SequenceParams::new(2, 2).unwrap();
        let firsts: Vec<BigInt> = gen_nbonacci_terms(qutrit, 5).unwrap();
        assert_eq!(firsts, [0, 1, 2, 6, 16, 44].map(int));
        let qudit4 = SequenceParams::new(2, 3).unwrap();
        assert_eq!(gen_nbonacci(qudit4, 4).unwrap(), int(45));
    }

    #[test]
    fn qudit_polynomials_in_d() {
        for d in 2i64..9 {
            let p = SequenceParams::for_alphabet(2, d as u64).unwrap();
            let t = gen_nbonacci_terms(p, 5).unwrap();
            assert_eq!(t[2], int(d - 1));
            assert_eq!(t[3], int((d - 1) * d));
            assert_eq!(t[4], int((d - 1) * (d - 1) * (d + 1)));
            assert_eq!(t[5], int((d - 1) * (d - 1) * (d * d + d - 1)));

            let p3 = SequenceParams::for_alphabet(3, d as u64).unwrap();
            let e = gen_nbonacci_terms(p3, 5).unwrap();
            assert_eq!(e[3], int(d - 1));
            assert_eq!(e[4], int((d - 1) * d));
            assert_eq!(e[5], int((d - 1) * d * d));
        }
    }

    #[test]
    fn alias_examples() {
        assert_eq!(tribonacci(2).unwrap(), int(1));
        assert_eq!(nbonacci(4, 5).unwrap(), int(2));
        assert_eq!(nbonacci(2, 9).unwrap(), int(34));
        let tribs: Vec<BigInt> = (2..8).map(|n| tribonacci(n).unwrap()).collect();
        assert_eq!(tribs, [1, 1, 2, 4, 7, 13].map(int));
    }

    #[test]
    fn nbonacci_leading_terms() {
        for big_n in 2..8usize {
            let b = |k: usize| nbonacci(big_n, k as u64).unwrap();
            assert_eq!(b(big_n), int(1));
            assert_eq!(b(big_n + 1), int(2));
            assert_eq!(b(big_n + 2), int(if big_n == 2 { 3 } else { 4 }));
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(SequenceParams::new(0, 1).is_err());
        assert!(SequenceParams::new(2, 0).is_err());
        assert!(SequenceParams::for_alphabet(2, 1).is_err());
    }

    #[test]
    fn identity_examples() {
        assert_eq!(lucas_product_identity(3, 4).unwrap(), int(6));
        assert_eq!(lucas_product_identity(1, 1).unwrap(), int(1));
        assert_eq!(lucas_product_identity(5, 5).unwrap(), int(25));
        assert_eq!(sum_product_identity(5).unwrap(), int(10));
        assert_eq!(sum_product_identity(2).unwrap(), int(1));
        assert_eq!(sum_product_identity(4).unwrap(), int(5));
        assert!(lucas_product_identity(0, 3).is_err());
        assert!(sum_product_identity(1).is_err());
    }

    #[test]
    fn degenerate_run_length_is_power() {
        for m in 1u64..6 {
            let p = SequenceParams::new(1, m).unwrap();
            for n in 1u32..30 {
                assert_eq!(gen_nbonacci(p, (n - 1) as u64).unwrap(), BigInt::from(m).pow(n - 1));
            }
        }
    }
}
