//! Exact scalars, weight vectors, power sums and the character.
//!
//! All arithmetic in this crate is exact rational arithmetic; route
//! agreement is asserted as bit-exact equality of canonical fractions, so
//! there is no floating-point mode in the core. Weights are `d ≥ 2` positive
//! rationals `w_1 ≥ … ≥ w_d` summing to 1. The character of a permutation is
//! the product of power sums `𝗉_n = w_1^n + … + w_d^n` over its nontrivial
//! orbits, with the identity mapping to 1.

use std::fmt;
use std::sync::Mutex;

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::perm::Permutation;

/// Arbitrary-precision rational; always in lowest terms with positive
/// denominator, so equality is canonical-form equality.
pub type Scalar = BigRational;

/// Small-integer fraction constructor.
pub fn rat(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Integer power with negative exponents allowed (base must be nonzero for
/// negative exponents).
pub fn pow_i(base: &Scalar, exp: i64) -> Scalar {
    if exp >= 0 {
        num::pow::pow(base.clone(), exp as usize)
    } else {
        num::pow::pow(base.clone(), exp.unsigned_abs() as usize).recip()
    }
}

/// Renders `3/4` as `"3/4"` and integers without a denominator.
pub fn format_rational(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Approximate decimal value, for display columns only.
pub fn to_f64(x: &Scalar) -> f64 {
    let numer = x.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let denom = x.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    numer / denom
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("weights need at least two entries")]
    TooFewWeights,
    #[error("weights must be strictly positive")]
    NonPositiveWeight,
    #[error("weights must sum to 1, got {0}")]
    WeightSum(String),
    #[error("power sums are defined for exponents n >= 1")]
    ZeroExponent,
}

/// Parses `"3"`, `"-3"`, or `"num/den"` into a scalar.
pub fn parse_rational(text: &str) -> Result<Scalar, AlgebraError> {
    let s = text.trim();
    let bad = || AlgebraError::ParseRational(text.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let numer: BigInt = n.trim().parse().map_err(|_| bad())?;
            let denom: BigInt = d.trim().parse().map_err(|_| bad())?;
            if denom.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(numer, denom))
        }
        None => {
            let numer: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Scalar::from_integer(numer))
        }
    }
}

/// The parameters `w_1 ≥ w_2 ≥ … ≥ w_d > 0`, `Σ w_i = 1`, `d ≥ 2`, together
/// with a memoized table of power sums.
///
/// The constructor sorts the weights into non-increasing order; equality and
/// hashing look only at the weights, never at the cache.
#[derive(Debug)]
pub struct WeightVector {
    weights: Vec<Scalar>,
    power_sums: Mutex<Vec<Scalar>>,
}

impl WeightVector {
    pub fn new(mut weights: Vec<Scalar>) -> Result<Self, AlgebraError> {
        if weights.len() < 2 {
            return Err(AlgebraError::TooFewWeights);
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(AlgebraError::NonPositiveWeight);
        }
        let total: Scalar = weights.iter().cloned().sum();
        if !total.is_one() {
            return Err(AlgebraError::WeightSum(format_rational(&total)));
        }
        weights.sort_by(|a, b| b.cmp(a));
        Ok(WeightVector {
            weights,
            power_sums: Mutex::new(Vec::new()),
        })
    }

    /// Parses a comma-separated weight list such as `"1/2,1/3,1/6"`.
    pub fn parse(text: &str) -> Result<Self, AlgebraError> {
        let weights = text
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()?;
        WeightVector::new(weights)
    }

    /// The uniform vector `(1/d, …, 1/d)`.
    pub fn uniform(d: usize) -> Result<Self, AlgebraError> {
        WeightVector::new(vec![rat(1, d.max(1) as i64); d])
    }

    pub fn d(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    /// 1-based accessor `w_i`.
    pub fn weight(&self, i: usize) -> &Scalar {
        &self.weights[i - 1]
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.iter().all(|w| w == &self.weights[0])
    }

    /// The power sum `𝗉_n = w_1^n + … + w_d^n`, `n ≥ 1`; memoized.
    pub fn power_sum(&self, n: usize) -> Result<Scalar, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::ZeroExponent);
        }
        let mut cache = self.power_sums.lock().expect("power-sum cache");
        while cache.len() < n {
            let e = cache.len() + 1;
            let value: Scalar = self
                .weights
                .iter()
                .map(|w| num::pow::pow(w.clone(), e))
                .sum();
            cache.push(value);
        }
        Ok(cache[n - 1].clone())
    }

    /// `Σ_j w_j^e` extended to `e = 0`, where the value is the number of
    /// weights. Used by orbit-wise colouring sums, whose exponents count
    /// marks and may legitimately be zero.
    pub(crate) fn power_sum_or_d(&self, e: usize) -> Scalar {
        if e == 0 {
            int(self.d() as i64)
        } else {
            self.power_sum(e).expect("e >= 1")
        }
    }
}

impl Clone for WeightVector {
    fn clone(&self) -> Self {
        let cached = self.power_sums.lock().expect("power-sum cache").clone();
        WeightVector {
            weights: self.weights.clone(),
            power_sums: Mutex::new(cached),
        }
    }
}

impl PartialEq for WeightVector {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights
    }
}

impl Eq for WeightVector {}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(format_rational).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The character value of a permutation: the product of `𝗉_|V|` over all
/// orbits `V` with `|V| ≥ 2`; the empty product (identity) is 1.
pub fn character(w: &WeightVector, p: &Permutation) -> Scalar {
    let bound = p.support_bound();
    if bound == 0 {
        return Scalar::one();
    }
    let decomposition = p.orbits(bound).expect("bound covers support");
    let mut value = Scalar::one();
    for orbit in decomposition.orbits() {
        if orbit.len() >= 2 {
            value *= w.power_sum(orbit.len()).expect("orbit size >= 2");
        }
    }
    value
}
