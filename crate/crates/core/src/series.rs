//! Truncated power series with exact coefficients.
//!
//! A series of order `N` stores `c_0..=c_N`. Binary operations require equal
//! orders; nothing is extended or truncated implicitly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },
    #[error("exp needs a zero constant term")]
    NonzeroConstantTerm,
    #[error("constant term must be 1")]
    ConstantTermNotOne,
    #[error("coefficient of x^{index} is not an integer")]
    NonIntegerCoefficient { index: usize },
    #[error("coefficient sum for t_{index} is odd")]
    ParityViolation { index: usize },
    #[error("coefficient t_{index} is negative")]
    NegativeCoefficient { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

pub type IntSeries = Series<BigInt>;
pub type RatSeries = Series<BigRational>;

impl<C: Clone + Zero + One> Series<C> {
    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = C::one();
        s
    }

    /// Pads with zeros or truncates `coeffs` to length `order + 1`.
    pub fn from_coeffs(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &C {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    fn check_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] = out.coeffs[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    /// `a(x) -> a(x^k)` at the same order.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k > 0, "substitute_power needs a positive exponent");
        let n = self.order();
        let mut out = Self::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i * k > n {
                break;
            }
            out.coeffs[i * k] = c.clone();
        }
        out
    }

    /// `x^k · a(x)`, truncated.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for i in 0..=n.saturating_sub(k) {
            if i + k <= n {
                out.coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        out
    }
}

impl IntSeries {
    pub fn from_i64(coeffs: &[i64], order: usize) -> Self {
        Series::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect(), order)
    }

    pub fn to_rational(&self) -> RatSeries {
        Series {
            coeffs: self.coeffs.iter().cloned().map(BigRational::from_integer).collect(),
        }
    }
}

impl RatSeries {
    /// Fails on the first non-integral coefficient.
    pub fn to_integer(&self) -> Result<IntSeries, SeriesError> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(index, c)| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(SeriesError::NonIntegerCoefficient { index })
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(Series { coeffs })
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `exp(a)` for `a(0) = 0`, from `n b_n = Σ_{k=1}^{n} k a_k b_{n-k}`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let n = self.order();
        let mut b = Self::one(n);
        for m in 1..=n {
            let mut acc = BigRational::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &b.coeffs[m - k] * BigInt::from(k);
                }
            }
            b.coeffs[m] = acc / BigInt::from(m);
        }
        Ok(b)
    }

    /// `log(a)` for `a(0) = 1`, from `n b_n = n a_n - Σ_{k=1}^{n-1} k b_k a_{n-k}`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        let n = self.order();
        let mut b = Self::zero(n);
        for m in 1..=n {
            let mut acc = &self.coeffs[m] * BigInt::from(m);
            for k in 1..m {
                if !b.coeffs[k].is_zero() {
                    acc -= &b.coeffs[k] * &self.coeffs[m - k] * BigInt::from(k);
                }
            }
            b.coeffs[m] = acc / BigInt::from(m);
        }
        Ok(b)
    }
}

impl<C: fmt::Display + Clone + Zero + One + PartialEq> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                _ if c.is_one() => write!(f, "x^{k}")?,
                _ => write!(f, "{c} x^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}
