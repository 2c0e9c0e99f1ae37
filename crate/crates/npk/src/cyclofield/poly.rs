//! Dense univariate polynomials: rational-coefficient ([`RatPoly`]) and
//! cyclotomic-coefficient ([`CycPoly`]).
//!
//! Coefficients are stored little-endian (index = exponent) with no trailing
//! zeros, so the zero polynomial is the empty vector.

use num_traits::{One, Zero};

use super::{CycNum, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly::new(vec![Rational::one()])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        RatPoly::new(coeffs)
    }

    /// `x^m - 1`.
    pub fn x_pow_minus_one(m: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); m + 1];
        coeffs[0] = -Rational::one();
        coeffs[m] = Rational::one();
        RatPoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        RatPoly::new(out)
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        RatPoly::new(out)
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    /// Euclidean division: `self = q * div + r` with `deg r < deg div`.
    pub fn divmod(&self, div: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        let dd = div.degree().ok_or(Error::DivisionByZero)?;
        let lead = div.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let c = rem[k].clone() / &lead;
            if !c.is_zero() {
                quot[k - dd] = c.clone();
                for (j, dc) in div.coeffs.iter().enumerate() {
                    rem[k - dd + j] -= &c * dc;
                }
            }
            rem.pop();
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
            if rem.len() <= dd {
                break;
            }
        }
        Ok((RatPoly::new(quot), RatPoly::new(rem)))
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, div: &RatPoly) -> Result<RatPoly> {
        let (q, r) = self.divmod(div)?;
        if !r.is_zero() {
            return Err(Error::Parse("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Polynomial with coefficients in a single cyclotomic field `Q(zeta_m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycPoly {
    order: u64,
    coeffs: Vec<CycNum>,
}

impl CycPoly {
    pub fn new(order: u64, mut coeffs: Vec<CycNum>) -> Result<Self> {
        let order = super::conductor_normalize(order);
        for c in coeffs.iter_mut() {
            *c = c.lift(order)?;
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(CycPoly { order, coeffs })
    }

    pub fn zero(order: u64) -> Self {
        CycPoly { order: super::conductor_normalize(order), coeffs: Vec::new() }
    }

    pub fn constant(c: CycNum) -> Self {
        let order = c.order();
        CycPoly::new(order, vec![c]).expect("constant in its own field")
    }

    /// `x - r`.
    pub fn x_minus(r: &CycNum) -> Self {
        let order = r.order();
        CycPoly::new(order, vec![-r.clone(), CycNum::one(order)]).expect("linear factor")
    }

    pub fn from_rat_poly(p: &RatPoly, order: u64) -> Self {
        let order = super::conductor_normalize(order);
        let coeffs = p
            .coeffs()
            .iter()
            .map(|c| CycNum::from_rational(c.clone(), order))
            .collect();
        CycPoly { order, coeffs }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn unify(&self, other: &CycPoly) -> Result<(CycPoly, CycPoly)> {
        let m = num_integer::lcm(self.order, other.order);
        Ok((self.lift(m)?, other.lift(m)?))
    }

    pub fn lift(&self, order: u64) -> Result<CycPoly> {
        let order = super::conductor_normalize(order);
        if order == self.order {
            return Ok(self.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.lift(order))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycPoly { order, coeffs })
    }

    pub fn add(&self, other: &CycPoly) -> Result<CycPoly> {
        let (a, b) = self.unify(other)?;
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut out = vec![CycNum::zero(a.order); n];
        for (i, c) in a.coeffs.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        for (i, c) in b.coeffs.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        CycPoly::new(a.order, out)
    }

    pub fn mul(&self, other: &CycPoly) -> Result<CycPoly> {
        let (a, b) = self.unify(other)?;
        if a.is_zero() || b.is_zero() {
            return Ok(CycPoly::zero(a.order));
        }
        let mut out = vec![CycNum::zero(a.order); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        CycPoly::new(a.order, out)
    }

    pub fn scale(&self, c: &CycNum) -> Result<CycPoly> {
        let m = num_integer::lcm(self.order, c.order());
        let c = c.lift(m)?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|x| Ok(&x.lift(m)? * &c))
            .collect::<Result<Vec<_>>>()?;
        CycPoly::new(m, coeffs)
    }

    pub fn eval(&self, x: &CycNum) -> Result<CycNum> {
        let m = num_integer::lcm(self.order, x.order());
        let x = x.lift(m)?;
        let mut acc = CycNum::zero(m);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &x) + &c.lift(m)?;
        }
        Ok(acc)
    }
}
