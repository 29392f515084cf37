//! Single-trial measurement distributions and the exact/real number tower.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Tolerance on `Σ p_i = 1` for real-valued coins.
pub const REAL_NORMALIZATION_TOL: f64 = 1e-12;

/// A probability or weight, exact whenever every input was exact.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Real(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Real(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Real(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Real(x) => write!(f, "{x}"),
        }
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Real(x)
    }
}

/// Nearest binary64 to `r`; falls back to a scaled quotient for huge operands.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let bits = r.numer().bits().max(r.denom().bits()) as i64;
        let shift = (bits - 1000).max(0) as usize;
        let num = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let den = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        num / den
    })
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Measurement distribution `p_0 … p_{d-1}` of one trial.
#[derive(Debug, Clone, PartialEq)]
pub enum CoinSpec {
    Exact(Vec<BigRational>),
    Real(Vec<f64>),
}

impl CoinSpec {
    pub fn exact(probs: Vec<BigRational>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidCoin("a coin needs at least two outcomes".into()));
        }
        if probs.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidCoin("negative probability".into()));
        }
        let total: BigRational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidCoin(format!("probabilities sum to {total}")));
        }
        Ok(CoinSpec::Exact(probs))
    }

    pub fn real(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidCoin("a coin needs at least two outcomes".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0 || *p > 1.0) {
            return Err(Error::InvalidCoin("probabilities must lie in [0, 1]".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > REAL_NORMALIZATION_TOL {
            return Err(Error::InvalidCoin(format!("probabilities sum to {total}")));
        }
        Ok(CoinSpec::Real(probs))
    }

    /// The maximally random coin over `d` outcomes.
    pub fn uniform(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidCoin(format!("alphabet size d = {d} must be >= 2")));
        }
        Self::exact(vec![ratio(1, d as i64); d])
    }

    pub fn d(&self) -> usize {
        match self {
            CoinSpec::Exact(p) => p.len(),
            CoinSpec::Real(p) => p.len(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CoinSpec::Exact(_))
    }

    pub fn prob(&self, symbol: usize) -> Scalar {
        match self {
            CoinSpec::Exact(p) => Scalar::Exact(p[symbol].clone()),
            CoinSpec::Real(p) => Scalar::Real(p[symbol]),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            CoinSpec::Exact(p) => p.iter().map(rational_to_f64).collect(),
            CoinSpec::Real(p) => p.clone(),
        }
    }

    pub(crate) fn check_symbol(&self, symbol: usize) -> Result<()> {
        if symbol >= self.d() {
            Err(Error::InvalidParams(format!(
                "target {symbol} is not a symbol of a {}-outcome coin",
                self.d()
            )))
        } else {
            Ok(())
        }
    }
}

/// Shannon entropy `-Σ p_i log2 p_i` of a coin, in bits, with `0·log 0 = 0`.
pub fn coin_entropy(coin: &CoinSpec) -> f64 {
    coin.to_f64()
        .into_iter()
        .filter(|p| *p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}
