//! Univariate polynomials over the working field (ℚ or one number field),
//! with factorization into irreducibles and root extraction.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::qpoly::{self, Rational};
use super::scalar::{NumberField, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<Scalar>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    pub fn from_rationals(c: &[Rational]) -> Self {
        Self::new(c.iter().cloned().map(Scalar::Rat).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => {
                let inv = l.inverse().expect("nonzero lead");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Scalar::zero();
        Self::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Scalar::zero();
        Self::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) - other.coeffs.get(i).unwrap_or(&z)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Self::new(out)
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        let db = divisor.degree().expect("division by zero polynomial");
        let inv = divisor.lead().unwrap().inverse().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Scalar::zero(); rem.len().saturating_sub(db).max(1)];
        while rem.len() > db {
            let top = rem.len() - 1;
            let c = &rem[top] * &inv;
            let shift = top - db;
            for (k, d) in divisor.coeffs.iter().enumerate() {
                let v = &c * d;
                rem[shift + k] -= &v;
            }
            quo[shift] = c;
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        (Self::new(quo), Self::new(rem))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * &Scalar::from_int(i as i64)).collect())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
    }

    /// `p(w + shift)`.
    pub fn shift(&self, shift: &Scalar) -> Self {
        let lin = Self::new(vec![shift.clone(), Scalar::one()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(c.clone()));
        }
        acc
    }

    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_rational().cloned()).collect()
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
                let o = a.canonical_cmp(b);
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }
}

/// Distinct monic irreducible factors over `field` (ℚ when `None`).
///
/// Over a number field this uses the norm method: shift `p(w − s·a)` until its
/// norm down to ℚ is squarefree, factor the norm over ℚ, and pull each factor
/// back by a gcd over the field.
pub fn factor_over(p: &UPoly, field: Option<&Arc<NumberField>>) -> Vec<UPoly> {
    let p = p.squarefree_part();
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut out = match field {
        None => {
            let q = p.rational_coeffs().expect("polynomial with algebraic coefficients factored over Q");
            qpoly::factor_squarefree(&q).into_iter().map(|f| UPoly::from_rationals(&f)).collect()
        }
        Some(k) => factor_over_extension(&p, k),
    };
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

fn factor_over_extension(p: &UPoly, k: &Arc<NumberField>) -> Vec<UPoly> {
    if p.degree() == Some(1) {
        return vec![p.monic()];
    }
    let gen = k.generator();
    let n = p.degree().unwrap();
    let deg_norm = n * k.degree();
    for s in shift_sequence() {
        let sa = &Scalar::from_int(s) * &gen;
        let q = p.shift(&-&sa);
        let xs: Vec<Rational> = (0..=deg_norm as i64).map(|x| Rational::from_integer(x.into())).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| q.eval(&Scalar::Rat(x.clone())).norm_in(k)).collect();
        let norm = qpoly::interpolate(&xs, &ys);
        if !qpoly::is_squarefree(&norm) {
            continue;
        }
        let factors = qpoly::factor_squarefree(&norm);
        if factors.len() == 1 {
            return vec![p.monic()];
        }
        return factors
            .iter()
            .map(|h| q.gcd(&UPoly::from_rationals(h)).shift(&sa).monic())
            .filter(|g| g.degree().unwrap_or(0) > 0)
            .collect();
    }
    unreachable!("some shift always yields a squarefree norm")
}

fn shift_sequence() -> impl Iterator<Item = i64> {
    (0..).map(|k: i64| if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 })
}

/// Roots lying in the field, and the irreducible factors of degree ≥ 2 that
/// carry the remaining roots. Roots are returned in canonical order.
pub fn roots_in(p: &UPoly, field: Option<&Arc<NumberField>>) -> (Vec<Scalar>, Vec<UPoly>) {
    let mut roots = Vec::new();
    let mut rest = Vec::new();
    for f in factor_over(p, field) {
        if f.degree() == Some(1) {
            roots.push(-&f.coeffs()[0]);
        } else {
            rest.push(f);
        }
    }
    roots.sort_by(|a, b| a.canonical_cmp(b));
    (roots, rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> UPoly {
        UPoly::new(v.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    #[test]
    fn rational_roots_sorted() {
        let (r, rest) = roots_in(&p(&[-1, 0, 1]), None);
        assert_eq!(r, vec![Scalar::from_int(-1), Scalar::from_int(1)]);
        assert!(rest.is_empty());
    }

    #[test]
    fn quadratic_splits_over_gaussians() {
        let k = NumberField::gaussian();
        let (r, rest) = roots_in(&p(&[1, 0, 1]), Some(&k));
        assert_eq!(r.len(), 2);
        assert!(rest.is_empty());
        for z in r {
            assert!(p(&[1, 0, 1]).eval(&z).is_zero());
        }
    }

    #[test]
    fn cyclotomic_cubic_over_eisenstein() {
        let k = NumberField::eisenstein();
        let (r, rest) = roots_in(&p(&[-1, 0, 0, 1]), Some(&k));
        assert_eq!(r.len(), 3);
        assert!(rest.is_empty());
    }

    #[test]
    fn cube_root_of_two_does_not_split() {
        let k = NumberField::new(vec![
            Rational::from_integer((-2).into()),
            Rational::zero(),
            Rational::zero(),
            Rational::one(),
        ])
        .unwrap();
        let (r, rest) = roots_in(&p(&[-2, 0, 0, 1]), Some(&k));
        assert_eq!(r, vec![k.generator()]);
        assert_eq!(rest.len(), 1);
        assert_eq!(rest[0].degree(), Some(2));
    }

    #[test]
    fn algebraic_coefficients() {
        let k = NumberField::gaussian();
        let i = k.generator();
        // (w - i)(w - 2) = w^2 - (2 + i) w + 2i
        let q = UPoly::new(vec![&Scalar::from_int(2) * &i, -(&Scalar::from_int(2) + &i), Scalar::one()]);
        let (r, rest) = roots_in(&q, Some(&k));
        assert!(rest.is_empty());
        assert_eq!(r, vec![Scalar::from_int(2), i]);
    }
}
