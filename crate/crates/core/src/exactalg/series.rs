use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Order of vanishing of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(usize),
    /// Every stored coefficient vanishes; the series is 0 at this precision.
    ZeroAtPrecision,
}

impl Order {
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::Finite(k) => Some(k),
            Order::ZeroAtPrecision => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::ZeroAtPrecision => write!(f, "zero-at-precision"),
        }
    }
}

/// A power series c_0 + c_1 t + … known modulo t^N, stored densely.
///
/// Binary operations truncate to the smaller precision of their operands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Scalar>,
}

impl Series {
    pub fn zero(precision: usize) -> Self {
        Series { coeffs: vec![Scalar::zero(); precision] }
    }

    pub fn one(precision: usize) -> Self {
        Self::constant(Scalar::one(), precision)
    }

    pub fn constant(c: Scalar, precision: usize) -> Self {
        Self::monomial(c, 0, precision)
    }

    /// The uniformizer t itself.
    pub fn variable(precision: usize) -> Self {
        Self::monomial(Scalar::one(), 1, precision)
    }

    pub fn monomial(c: Scalar, exponent: usize, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if exponent < precision {
            s.coeffs[exponent] = c;
        }
        s
    }

    /// Terms at or beyond `precision` are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Scalar)>, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        for (e, c) in terms {
            if e < precision {
                s.coeffs[e] += &c;
            }
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        Series { coeffs }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of t^k; zero when k is beyond the precision.
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn ord(&self) -> Order {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => Order::Finite(k),
            None => Order::ZeroAtPrecision,
        }
    }

    pub fn is_zero_at_precision(&self) -> bool {
        self.ord() == Order::ZeroAtPrecision
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let n = precision.min(self.precision());
        Series { coeffs: self.coeffs[..n].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        Series { coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        Series { coeffs: (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect() }
    }

    pub fn neg(&self) -> Self {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Series { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let mut out = vec![Scalar::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Series { coeffs: out }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Series::one(self.precision());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Multiply by t^k, keeping the precision.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.precision();
        let mut out = vec![Scalar::zero(); n];
        if k < n {
            out[k..].clone_from_slice(&self.coeffs[..n - k]);
        }
        Series { coeffs: out }
    }

    /// Divide by t^k where the first k coefficients vanish; precision drops by k.
    pub fn unshift(&self, k: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        Series { coeffs: self.coeffs.iter().skip(k).cloned().collect() }
    }

    /// `self(inner(t))`; needs `ord(inner) ≥ 1`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs.first().is_none_or(|c| c.is_zero()) {
            return Err(Error::CompositionOrder);
        }
        let n = self.precision().min(inner.precision());
        let inner = inner.truncate(n);
        let mut acc = Series::zero(n);
        for c in self.coeffs.iter().take(n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a unit series.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.precision();
        let c0 = match self.ord() {
            Order::Finite(0) => self.coeffs[0].inverse().expect("nonzero"),
            Order::Finite(k) => return Err(Error::NonUnit(k)),
            Order::ZeroAtPrecision => return Err(Error::NonUnit(n)),
        };
        let mut out = vec![Scalar::zero(); n];
        out[0] = c0.clone();
        for k in 1..n {
            let mut acc = Scalar::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &(&self.coeffs[j] * &out[k - j]);
                }
            }
            out[k] = -&(&acc * &c0);
        }
        Ok(Series { coeffs: out })
    }

    /// `self^alpha` for a series with constant term 1.
    pub fn pow_rational(&self, alpha: &BigRational) -> Result<Self> {
        if self.coeffs.first() != Some(&Scalar::one()) {
            return Err(Error::InvalidArgument("rational power needs constant term 1".into()));
        }
        let n = self.precision();
        let alpha = Scalar::Rat(alpha.clone());
        let mut out = vec![Scalar::zero(); n];
        out[0] = Scalar::one();
        for k in 1..n {
            let mut acc = Scalar::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let w = &(&alpha * &Scalar::from_int(j as i64)) - &Scalar::from_int((k - j) as i64);
                acc += &(&(&w * &self.coeffs[j]) * &out[k - j]);
            }
            out[k] = &acc / &Scalar::from_int(k as i64);
        }
        Ok(Series { coeffs: out })
    }

    pub fn derivative(&self) -> Self {
        let n = self.precision();
        let mut out: Vec<Scalar> = (1..n).map(|k| &self.coeffs[k] * &Scalar::from_int(k as i64)).collect();
        // the top coefficient of the derivative is unknown, so precision drops
        out.truncate(n.saturating_sub(1));
        Series { coeffs: out }
    }

    /// Compositional inverse of a series of order exactly 1.
    pub fn reversion(&self) -> Result<Self> {
        if self.ord() != Order::Finite(1) {
            return Err(Error::InvalidArgument("reversion needs a series of order exactly 1".into()));
        }
        let n = self.precision();
        let c1 = self.coeffs[1].clone();
        let s = Series::variable(n);
        // fixed-point iteration gains at least one correct coefficient per step
        let mut psi = s.scale(&c1.inverse().expect("nonzero"));
        for _ in 0..n + 1 {
            let err = self.compose(&psi)?.sub(&s);
            if err.is_zero_at_precision() {
                return Ok(psi);
            }
            psi = psi.sub(&err.scale(&c1.inverse().expect("nonzero")));
        }
        Err(Error::NoStabilization("series reversion".into()))
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            let neg = matches!(c, Scalar::Rat(q) if *q < BigRational::zero());
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let coef = if mag.is_rational() { mag.to_string() } else { format!("({mag})") };
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{coef}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{coef}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{coef}*t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.precision())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(terms: &[(usize, i64)], n: usize) -> Series {
        Series::from_terms(terms.iter().map(|&(e, c)| (e, Scalar::from_int(c))), n)
    }

    #[test]
    fn order_examples() {
        assert_eq!(s(&[(3, 1), (5, 2)], 10).ord(), Order::Finite(3));
        assert_eq!(s(&[(0, 1), (1, 1)], 10).ord(), Order::Finite(0));
        assert_eq!(Series::zero(10).ord(), Order::ZeroAtPrecision);
        // beyond precision is invisible
        assert_eq!(s(&[(12, 1)], 10).ord(), Order::ZeroAtPrecision);
    }

    #[test]
    fn ring_examples() {
        let a = s(&[(0, 1), (1, 1)], 8);
        let b = s(&[(0, 1), (1, -1)], 8);
        assert_eq!(a.mul(&b), s(&[(0, 1), (2, -1)], 8));
        assert_eq!(a.mul(&a.inverse().unwrap()), Series::one(8));
    }

    #[test]
    fn invert_geometric_at_four() {
        let a = s(&[(0, 1), (1, 1)], 4);
        assert_eq!(a.inverse().unwrap(), s(&[(0, 1), (1, -1), (2, 1), (3, -1)], 4));
        assert!(matches!(s(&[(1, 1)], 4).inverse(), Err(Error::NonUnit(1))));
    }

    #[test]
    fn compose_example() {
        let outer = s(&[(2, 1)], 4);
        let inner = s(&[(1, 1), (2, 1)], 4);
        assert_eq!(outer.compose(&inner).unwrap(), s(&[(2, 1), (3, 2)], 4));
        assert!(outer.compose(&s(&[(0, 1)], 4)).is_err());
    }

    #[test]
    fn precision_is_minimum() {
        let a = s(&[(0, 1)], 5);
        let b = s(&[(0, 1)], 3);
        assert_eq!(a.add(&b).precision(), 3);
        assert_eq!(a.mul(&b).precision(), 3);
    }

    #[test]
    fn square_root_of_one_plus_t() {
        let g = s(&[(0, 1), (1, 1)], 6);
        let r = g.pow_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(r.mul(&r), g);
        assert_eq!(r.coeff(2), Scalar::from_ratio(-1, 8));
    }

    #[test]
    fn reversion_roundtrip() {
        let phi = s(&[(1, 2), (2, 3), (4, -1)], 10);
        let psi = phi.reversion().unwrap();
        assert_eq!(phi.compose(&psi).unwrap(), Series::variable(10));
    }
}
