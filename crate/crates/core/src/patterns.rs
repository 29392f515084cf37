//! Brute-force enumeration of allowed outcome strings.
//!
//! A string is *allowed* when the run `t^N` (N consecutive copies of the
//! target symbol) occurs in it exactly once, counting occurrences at every
//! starting offset, and that single occurrence sits where the
//! [`Position`] rule asks. Runs longer than `N` overlap themselves and are
//! therefore rejected.
//!
//! Everything here walks all `d^n` strings. This module is the oracle the
//! closed forms in [`crate::sequences`] and [`crate::probability`] are
//! checked against, so it must not take shortcuts through them.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::coin::{CoinSpec, Scalar};
use crate::error::{Error, Result};

/// Maximum number of strings (`d^n`) a single enumeration may visit.
pub const ENUMERATION_BUDGET: u64 = 1 << 24;

/// Below this many strings enumeration stays on the calling thread.
const PARALLEL_THRESHOLD: u64 = 1 << 14;

/// Where the single run of targets must sit. `At(k)` is 1-based: the run
/// starts at symbol `k`, counting the leftmost symbol as 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Position {
    End,
    At(usize),
    Anywhere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PatternSpec {
    alphabet: u8,
    target: u8,
    run_length: usize,
    position: Position,
}

impl PatternSpec {
    pub fn new(alphabet: u8, target: u8, run_length: usize, position: Position) -> Result<Self> {
        if alphabet < 2 {
            return Err(Error::InvalidPattern(format!("alphabet size {alphabet} must be >= 2")));
        }
        if target >= alphabet {
            return Err(Error::InvalidPattern(format!(
                "target {target} is not a symbol of a {alphabet}-letter alphabet"
            )));
        }
        if run_length < 1 {
            return Err(Error::InvalidPattern("run length must be >= 1".into()));
        }
        if position == Position::At(0) {
            return Err(Error::InvalidPattern("positions are 1-based".into()));
        }
        Ok(Self {
            alphabet,
            target,
            run_length,
            position,
        })
    }

    /// A run of `N` ones ending the string.
    pub fn ending(alphabet: u8, run_length: usize) -> Result<Self> {
        Self::new(alphabet, 1, run_length, Position::End)
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn target(&self) -> u8 {
        self.target
    }

    pub fn run_length(&self) -> usize {
        self.run_length
    }

    pub fn position(&self) -> Position {
        self.position
    }

    pub fn with_position(self, position: Position) -> Result<Self> {
        Self::new(self.alphabet, self.target, self.run_length, position)
    }

    /// Validates the spec against a string length. `Ok(false)` means no
    /// string of this length can match (too short for the run).
    fn admits_length(&self, n: usize) -> Result<bool> {
        if n < 1 {
            return Err(Error::InvalidPattern("strings must have length >= 1".into()));
        }
        match self.position {
            Position::At(k) => {
                let max = (n + 1).saturating_sub(self.run_length);
                if k > max {
                    return Err(Error::PositionOutOfRange { k, max });
                }
                Ok(true)
            }
            Position::End | Position::Anywhere => Ok(n >= self.run_length),
        }
    }

    /// Predicate on a raw symbol slice; the spec must already admit its length.
    pub(crate) fn matches(&self, symbols: &[u8]) -> bool {
        let start = match single_occurrence(symbols, self.target, self.run_length) {
            Some(start) => start,
            None => return false,
        };
        match self.position {
            Position::End => start + self.run_length == symbols.len(),
            Position::At(k) => start + 1 == k,
            Position::Anywhere => true,
        }
    }
}

/// Start offset of the run when `target^run` occurs exactly once.
fn single_occurrence(symbols: &[u8], target: u8, run: usize) -> Option<usize> {
    let mut streak = 0usize;
    let mut found = None;
    for (i, &s) in symbols.iter().enumerate() {
        if s == target {
            streak += 1;
            if streak >= run {
                if found.is_some() {
                    return None;
                }
                found = Some(i + 1 - run);
            }
        } else {
            streak = 0;
        }
    }
    found
}

/// A computational-basis label: `n` symbols over a `d`-letter alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutcomeString {
    symbols: Vec<u8>,
    alphabet: u8,
}

impl OutcomeString {
    pub fn new(symbols: Vec<u8>, alphabet: u8) -> Result<Self> {
        if alphabet < 2 {
            return Err(Error::InvalidPattern(format!("alphabet size {alphabet} must be >= 2")));
        }
        if symbols.is_empty() {
            return Err(Error::InvalidPattern("outcome strings must be non-empty".into()));
        }
        if let Some(s) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(Error::InvalidPattern(format!("symbol {s} outside alphabet {alphabet}")));
        }
        Ok(Self { symbols, alphabet })
    }

    /// Parses digit strings such as `"0110"` (alphabets up to 10 letters).
    pub fn from_digits(digits: &str, alphabet: u8) -> Result<Self> {
        let symbols = digits
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|v| v as u8)
                    .ok_or_else(|| Error::InvalidPattern(format!("not a digit: {c:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(symbols, alphabet)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Base-`d` reading of the label, leftmost symbol most significant.
    pub fn basis_index(&self) -> u64 {
        basis_index(&self.symbols, self.alphabet)
    }
}

pub(crate) fn basis_index(symbols: &[u8], alphabet: u8) -> u64 {
    symbols
        .iter()
        .fold(0u64, |acc, &s| acc * alphabet as u64 + s as u64)
}

impl fmt::Display for OutcomeString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet <= 10 {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(u8::to_string).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

/// `d^n`, or `BudgetExceeded` when it is larger than `budget`.
pub(crate) fn checked_space(d: u64, n: usize, budget: u64) -> Result<u64> {
    let exceeded = || Error::BudgetExceeded {
        requested: format!("{d}^{n}"),
        budget,
    };
    let exp = u32::try_from(n).map_err(|_| exceeded())?;
    match d.checked_pow(exp) {
        Some(size) if size <= budget => Ok(size),
        _ => Err(exceeded()),
    }
}

pub fn is_allowed(s: &OutcomeString, p: &PatternSpec) -> Result<bool> {
    if s.alphabet != p.alphabet {
        return Err(Error::InvalidPattern(format!(
            "string alphabet {} differs from pattern alphabet {}",
            s.alphabet, p.alphabet
        )));
    }
    if !p.admits_length(s.len())? {
        return Err(Error::InvalidPattern(format!(
            "string of length {} is shorter than the run length {}",
            s.len(),
            p.run_length
        )));
    }
    Ok(p.matches(&s.symbols))
}

/// Lexicographic odometer over every length-`n` string sharing a fixed prefix.
struct Odometer {
    buf: Vec<u8>,
    alphabet: u8,
    fixed: usize,
    done: bool,
}

impl Odometer {
    fn new(n: usize, alphabet: u8, prefix: &[u8]) -> Self {
        let mut buf = vec![0u8; n];
        buf[..prefix.len()].copy_from_slice(prefix);
        Self {
            buf,
            alphabet,
            fixed: prefix.len(),
            done: false,
        }
    }

    fn current(&self) -> Option<&[u8]> {
        (!self.done).then_some(&self.buf[..])
    }

    fn advance(&mut self) {
        for i in (self.fixed..self.buf.len()).rev() {
            if self.buf[i] + 1 < self.alphabet {
                self.buf[i] += 1;
                return;
            }
            self.buf[i] = 0;
        }
        self.done = true;
    }
}

fn prefix_digits(mut block: u64, len: usize, alphabet: u8) -> Vec<u8> {
    let mut digits = vec![0u8; len];
    for slot in digits.iter_mut().rev() {
        *slot = (block % alphabet as u64) as u8;
        block /= alphabet as u64;
    }
    digits
}

/// Splits the search space into `d^len` prefix blocks, enough for parallel work.
fn block_prefix_len(n: usize, alphabet: u8) -> usize {
    let mut len = 0;
    let mut blocks = 1u64;
    while len < n && blocks < 1024 {
        len += 1;
        blocks *= alphabet as u64;
    }
    len
}

/// Folds every allowed string of length `n` into one accumulator per block of
/// common prefixes. Blocks come back in lexicographic order.
fn fold_blocks<T, I, F>(n: usize, p: &PatternSpec, init: I, step: F) -> Result<Vec<T>>
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &[u8]) + Sync,
{
    let space = checked_space(p.alphabet as u64, n, ENUMERATION_BUDGET)?;
    if !p.admits_length(n)? {
        return Ok(Vec::new());
    }
    let run_block = |prefix: &[u8]| {
        let mut acc = init();
        let mut odo = Odometer::new(n, p.alphabet, prefix);
        while let Some(cur) = odo.current() {
            if p.matches(cur) {
                step(&mut acc, cur);
            }
            odo.advance();
        }
        acc
    };
    if space < PARALLEL_THRESHOLD {
        return Ok(vec![run_block(&[])]);
    }
    let len = block_prefix_len(n, p.alphabet);
    let blocks = (p.alphabet as u64).pow(len as u32);
    Ok((0..blocks)
        .into_par_iter()
        .map(|b| run_block(&prefix_digits(b, len, p.alphabet)))
        .collect())
}

/// Streaming iterator over the allowed strings of one length, in lexicographic order.
pub struct AllowedStrings {
    odometer: Odometer,
    pattern: PatternSpec,
}

impl Iterator for AllowedStrings {
    type Item = OutcomeString;

    fn next(&mut self) -> Option<OutcomeString> {
        loop {
            let cur = self.odometer.current()?;
            let hit = self.pattern.matches(cur).then(|| OutcomeString {
                symbols: cur.to_vec(),
                alphabet: self.pattern.alphabet,
            });
            self.odometer.advance();
            if hit.is_some() {
                return hit;
            }
        }
    }
}

pub fn allowed_strings(n: usize, p: &PatternSpec) -> Result<AllowedStrings> {
    checked_space(p.alphabet as u64, n, ENUMERATION_BUDGET)?;
    let mut odometer = Odometer::new(n, p.alphabet, &[]);
    if !p.admits_length(n)? {
        odometer.done = true;
    }
    Ok(AllowedStrings {
        odometer,
        pattern: *p,
    })
}

pub fn enumerate_allowed(n: usize, p: &PatternSpec) -> Result<Vec<OutcomeString>> {
    let blocks = fold_blocks(n, p, Vec::new, |acc: &mut Vec<OutcomeString>, s| {
        acc.push(OutcomeString {
            symbols: s.to_vec(),
            alphabet: p.alphabet,
        })
    })?;
    Ok(blocks.into_iter().flatten().collect())
}

pub fn count_allowed(n: usize, p: &PatternSpec) -> Result<BigInt> {
    let blocks = fold_blocks(n, p, || 0u64, |acc, _| *acc += 1)?;
    Ok(BigInt::from(blocks.into_iter().sum::<u64>()))
}

/// Number of allowed strings per symbol-count vector `(c_0, …, c_{d-1})`.
pub fn symbol_histogram(n: usize, p: &PatternSpec) -> Result<HashMap<Vec<u8>, u64>> {
    let d = p.alphabet as usize;
    let blocks = fold_blocks(
        n,
        p,
        || (HashMap::<Vec<u8>, u64>::new(), vec![0u8; d]),
        |(hist, key), s| {
            key.iter_mut().for_each(|c| *c = 0);
            for &sym in s {
                key[sym as usize] += 1;
            }
            match hist.get_mut(key.as_slice()) {
                Some(count) => *count += 1,
                None => {
                    hist.insert(key.clone(), 1);
                }
            }
        },
    )?;
    let mut merged: HashMap<Vec<u8>, u64> = HashMap::new();
    for (block, _) in blocks {
        for (key, count) in block {
            *merged.entry(key).or_insert(0) += count;
        }
    }
    Ok(merged)
}

/// `Σ_{allowed s} Π_i p_{s_i}`: the Born-rule probability of the pattern event.
pub fn weighted_count(n: usize, p: &PatternSpec, coin: &CoinSpec) -> Result<Scalar> {
    if coin.d() != p.alphabet as usize {
        return Err(Error::InvalidParams(format!(
            "coin has {} outcomes but the pattern alphabet has {}",
            coin.d(),
            p.alphabet
        )));
    }
    let hist = symbol_histogram(n, p)?;
    Ok(match coin {
        CoinSpec::Exact(probs) => {
            let mut total = BigRational::zero();
            for (key, count) in &hist {
                let mut term = BigRational::from_integer(BigInt::from(*count));
                for (prob, &c) in probs.iter().zip(key) {
                    if c > 0 {
                        term *= prob.pow(c as i32);
                    }
                }
                total += term;
            }
            Scalar::Exact(total)
        }
        CoinSpec::Real(probs) => {
            let total = hist
                .iter()
                .map(|(key, count)| {
                    probs
                        .iter()
                        .zip(key)
                        .fold(*count as f64, |acc, (prob, &c)| acc * prob.powi(c as i32))
                })
                .sum();
            Scalar::Real(total)
        }
    })
}

/// Allowed binary strings read as integers, ascending.
pub fn decimal_states(n: usize, p: &PatternSpec) -> Result<Vec<u64>> {
    if p.alphabet != 2 {
        return Err(Error::Unsupported(
            "decimal state labels are defined for binary strings only".into(),
        ));
    }
    let blocks = fold_blocks(n, p, Vec::new, |acc: &mut Vec<u64>, s| {
        acc.push(basis_index(s, 2))
    })?;
    Ok(blocks.into_iter().flatten().collect())
}
