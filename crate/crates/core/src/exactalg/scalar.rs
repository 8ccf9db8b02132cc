use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::qpoly::{self, Rational};
use crate::error::{Error, Result};

/// Name used for the generator of a number field when printing and parsing.
pub const GENERATOR: &str = "a";

/// A simple algebraic extension ℚ[a]/(m(a)).
///
/// `m` is stored monic, low degree first, and is required to be irreducible
/// over ℚ so that every nonzero element is invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    minpoly: Vec<Rational>,
}

impl NumberField {
    pub fn new(minpoly: Vec<Rational>) -> Result<Arc<Self>> {
        let m = qpoly::monic(&minpoly);
        let deg = qpoly::degree(&m).unwrap_or(0);
        if deg < 2 {
            return Err(Error::InvalidArgument(format!("minimal polynomial must have degree >= 2, got degree {deg}")));
        }
        let factors = qpoly::factor(&m);
        if factors.len() != 1 || factors[0].1 != 1 {
            return Err(Error::InvalidArgument(format!(
                "minimal polynomial {} is not irreducible over Q",
                fmt_qpoly(&m, GENERATOR)
            )));
        }
        Ok(Arc::new(NumberField { minpoly: m }))
    }

    /// ℚ(i), i² = −1.
    pub fn gaussian() -> Arc<Self> {
        Self::new(vec![Rational::one(), Rational::zero(), Rational::one()]).expect("x^2+1 irreducible")
    }

    /// ℚ(ω), ω² + ω + 1 = 0.
    pub fn eisenstein() -> Arc<Self> {
        Self::new(vec![Rational::one(), Rational::one(), Rational::one()]).expect("x^2+x+1 irreducible")
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[Rational] {
        &self.minpoly
    }

    pub fn generator(self: &Arc<Self>) -> Scalar {
        let mut c = vec![Rational::zero(); self.degree()];
        c[1] = Rational::one();
        Scalar::Alg(self.clone(), c)
    }

    fn reduce(&self, p: &[Rational]) -> Vec<Rational> {
        let mut r = qpoly::rem(p, &self.minpoly);
        r.resize(self.degree(), Rational::zero());
        r
    }

    /// Matrix of multiplication by the element with coordinates `c` on the
    /// power basis 1, a, …, a^{D−1}.
    fn multiplication_matrix(&self, c: &[Rational]) -> Vec<Vec<Rational>> {
        let d = self.degree();
        let mut cols = Vec::with_capacity(d);
        for k in 0..d {
            let mut basis = vec![Rational::zero(); k + 1];
            basis[k] = Rational::one();
            cols.push(self.reduce(&qpoly::mul(c, &basis)));
        }
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{g}]/({})", fmt_qpoly(&self.minpoly, GENERATOR), g = GENERATOR)
    }
}

/// An exact scalar: a rational, or an element of one number field.
///
/// Elements of a number field whose coordinates on a, a², … all vanish are
/// always stored as `Rat`, so structural equality is mathematical equality.
/// Arithmetic between elements of two different fields panics; callers keep a
/// single field per computation.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(Rational),
    Alg(Arc<NumberField>, Vec<Rational>),
}

impl Scalar {
    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Rat(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn rational(q: Rational) -> Self {
        Scalar::Rat(q)
    }

    /// Build an element from coordinates on the power basis of `field`.
    pub fn in_field(field: &Arc<NumberField>, coords: &[Rational]) -> Self {
        Self::canonical(field.clone(), field.reduce(coords))
    }

    fn canonical(field: Arc<NumberField>, c: Vec<Rational>) -> Self {
        if c.iter().skip(1).all(|x| x.is_zero()) {
            Scalar::Rat(c.into_iter().next().unwrap_or_else(Rational::zero))
        } else {
            Scalar::Alg(field, c)
        }
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Alg(f, _) => Some(f),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(q) => Some(q),
            Scalar::Alg(..) => None,
        }
    }

    /// Coordinates on the power basis of `field` (length = field degree).
    pub fn coords_in(&self, field: &NumberField) -> Vec<Rational> {
        match self {
            Scalar::Rat(q) => {
                let mut c = vec![Rational::zero(); field.degree()];
                c[0] = q.clone();
                c
            }
            Scalar::Alg(f, c) => {
                assert!(**f == *field, "scalar belongs to a different number field");
                c.clone()
            }
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(q) if q.is_zero() => None,
            Scalar::Rat(q) => Some(Scalar::Rat(q.recip())),
            Scalar::Alg(f, c) => {
                let (g, s, _) = qpoly::ext_gcd(c, f.minpoly());
                debug_assert_eq!(qpoly::degree(&g), Some(0));
                Some(Scalar::in_field(f, &s))
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Field norm down to ℚ.
    pub fn norm(&self) -> Rational {
        match self {
            Scalar::Rat(q) => q.clone(),
            Scalar::Alg(f, c) => qpoly::determinant(f.multiplication_matrix(c)),
        }
    }

    /// Norm from `field` down to ℚ; a rational q has norm q^[K:ℚ].
    pub fn norm_in(&self, field: &NumberField) -> Rational {
        qpoly::determinant(field.multiplication_matrix(&self.coords_in(field)))
    }

    /// Total order used only to make outputs deterministic.
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Rat(_), Scalar::Alg(..)) => Ordering::Less,
            (Scalar::Alg(..), Scalar::Rat(_)) => Ordering::Greater,
            (Scalar::Alg(_, a), Scalar::Alg(_, b)) => {
                for (x, y) in a.iter().rev().zip(b.iter().rev()) {
                    let o = x.cmp(y);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// Parse `"p"`, `"p/q"`, or a polynomial in the generator such as
    /// `"1/2 - 3*a + a^2"` (the latter needs `field`).
    pub fn parse(s: &str, field: Option<&Arc<NumberField>>) -> Result<Scalar> {
        let bad = |why: &str| Error::Parse(format!("invalid scalar {s:?}: {why}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        if !compact.contains(GENERATOR) {
            return parse_rational(&compact).map(Scalar::Rat).ok_or_else(|| bad("not a rational"));
        }
        let field = field.ok_or_else(|| bad("generator used but no number field given"))?;
        let mut coords: Vec<Rational> = Vec::new();
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for term in terms {
            let (coef, power) = match term.find(GENERATOR) {
                None => (parse_rational(&term).ok_or_else(|| bad("bad term"))?, 0usize),
                Some(pos) => {
                    let head = term[..pos].trim_end_matches('*');
                    let coef = match head {
                        "" | "+" => Rational::one(),
                        "-" => -Rational::one(),
                        h => parse_rational(h).ok_or_else(|| bad("bad coefficient"))?,
                    };
                    let tail = &term[pos + GENERATOR.len()..];
                    let power = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(|| bad("bad exponent"))?
                    };
                    (coef, power)
                }
            };
            if coords.len() <= power {
                coords.resize(power + 1, Rational::zero());
            }
            coords[power] += coef;
        }
        Ok(Scalar::in_field(field, &coords))
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.strip_prefix('+').unwrap_or(s);
    match s.split_once('/') {
        None => BigInt::from_str(s).ok().map(Rational::from_integer),
        Some((n, d)) => {
            let n = BigInt::from_str(n).ok()?;
            let d = BigInt::from_str(d).ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
    }
}

pub(crate) fn fmt_qpoly(p: &[Rational], var: &str) -> String {
    let mut out = String::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = *c < Rational::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) => write!(f, "{q}"),
            Scalar::Alg(_, c) => write!(f, "{}", fmt_qpoly(c, GENERATOR)),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Alg(f, a), Scalar::Alg(g, b)) => (Arc::ptr_eq(f, g) || f == g) && a == b,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(q) if q.is_zero())
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::Rat(Rational::one())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::Rat(q)
    }
}

fn same_field<'a>(f: &'a Arc<NumberField>, g: &Arc<NumberField>) -> &'a Arc<NumberField> {
    assert!(Arc::ptr_eq(f, g) || f == g, "arithmetic across distinct number fields");
    f
}

fn add_impl(a: &Scalar, b: &Scalar, negate_b: bool) -> Scalar {
    match (a, b) {
        (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(if negate_b { x - y } else { x + y }),
        (Scalar::Alg(f, x), Scalar::Rat(y)) => {
            let mut c = x.clone();
            if negate_b {
                c[0] -= y;
            } else {
                c[0] += y;
            }
            Scalar::canonical(f.clone(), c)
        }
        (Scalar::Rat(x), Scalar::Alg(f, y)) => {
            let mut c: Vec<Rational> = if negate_b { y.iter().map(|v| -v).collect() } else { y.clone() };
            c[0] += x;
            Scalar::canonical(f.clone(), c)
        }
        (Scalar::Alg(f, x), Scalar::Alg(g, y)) => {
            let f = same_field(f, g);
            let c = x.iter().zip(y).map(|(p, q)| if negate_b { p - q } else { p + q }).collect();
            Scalar::canonical(f.clone(), c)
        }
    }
}

fn mul_impl(a: &Scalar, b: &Scalar) -> Scalar {
    match (a, b) {
        (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
        (Scalar::Alg(f, x), Scalar::Rat(y)) | (Scalar::Rat(y), Scalar::Alg(f, x)) => {
            Scalar::canonical(f.clone(), x.iter().map(|v| v * y).collect())
        }
        (Scalar::Alg(f, x), Scalar::Alg(g, y)) => {
            let f = same_field(f, g);
            Scalar::canonical(f.clone(), f.reduce(&qpoly::mul(x, y)))
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        add_impl(self, rhs, false)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        add_impl(self, rhs, true)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        mul_impl(self, rhs)
    }
}

/// Panics on division by zero, like integer division.
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        let inv = rhs.inverse().expect("division by zero scalar");
        mul_impl(self, &inv)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(q) => Scalar::Rat(-q),
            Scalar::Alg(f, c) => Scalar::Alg(f.clone(), c.iter().map(|v| -v).collect()),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_normalized() {
        let a = Scalar::from_ratio(2, -4);
        assert_eq!(a.to_string(), "-1/2");
        assert_eq!(a, Scalar::from_ratio(-1, 2));
    }

    #[test]
    fn gaussian_arithmetic() {
        let k = NumberField::gaussian();
        let i = k.generator();
        assert_eq!(&i * &i, Scalar::from_int(-1));
        let z = Scalar::parse("1 + 2*a", Some(&k)).unwrap();
        let w = z.inverse().unwrap();
        assert_eq!(&z * &w, Scalar::one());
        assert_eq!(z.norm(), Rational::from_integer(5.into()));
    }

    #[test]
    fn eisenstein_cube_root_of_unity() {
        let k = NumberField::eisenstein();
        let w = k.generator();
        assert_eq!(w.pow(3), Scalar::one());
        assert_eq!(&(&w * &w) + &w, Scalar::from_int(-1));
    }

    #[test]
    fn reducible_minpoly_rejected() {
        let m = vec![Rational::from_integer((-1).into()), Rational::zero(), Rational::one()];
        assert!(NumberField::new(m).is_err());
    }

    #[test]
    fn parse_forms() {
        let k = NumberField::gaussian();
        assert_eq!(Scalar::parse("-3/2", None).unwrap(), Scalar::from_ratio(-3, 2));
        assert_eq!(Scalar::parse("a^2", Some(&k)).unwrap(), Scalar::from_int(-1));
        assert_eq!(Scalar::parse("-a", Some(&k)).unwrap(), -k.generator());
        assert!(Scalar::parse("a", None).is_err());
        assert!(Scalar::parse("1/0", None).is_err());
        let z = Scalar::parse("1/2 - 3*a", Some(&k)).unwrap();
        assert_eq!(Scalar::parse(&z.to_string(), Some(&k)).unwrap(), z);
    }
}
