use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::scalar::Scalar;
use super::series::Series;

/// Sparse multivariate polynomial over the working field.
///
/// Invariant: no zero coefficient is stored, so two polynomials are equal iff
/// their term maps are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

/// Display names for ambient coordinates: x, y, z for up to three variables,
/// x1, …, xm beyond that.
pub fn var_names(nvars: usize) -> Vec<String> {
    if nvars <= 3 {
        ["x", "y", "z"][..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=nvars).map(|k| format!("x{k}")).collect()
    }
}

/// All exponent vectors of total degree ≤ `max_degree`, ordered by degree and
/// then with earlier variables first (x², xy, y², …).
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        let mut cur = vec![0u32; nvars];
        fill_degree(nvars, 0, d, &mut cur, &mut out);
    }
    out
}

fn fill_degree(nvars: usize, pos: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if nvars == 0 {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == nvars - 1 {
        cur[pos] = remaining;
        out.push(cur.clone());
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        fill_degree(nvars, pos + 1, remaining - e, cur, out);
    }
    cur[pos] = 0;
}

fn degree_of(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::from_terms(nvars, [(vec![0; nvars], c)])
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    /// The coordinate function `x_k` (0-based).
    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        Self::from_terms(nvars, [(e, Scalar::one())])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>) -> Self {
        let mut map: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length must equal the number of variables");
            let slot = map.entry(e).or_insert_with(Scalar::zero);
            *slot += &c;
        }
        map.retain(|_, c| !c.is_zero());
        Poly { nvars, terms: map }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree_of(e)).max()
    }

    /// Degree of the lowest nonzero homogeneous part (the multiplicity at the
    /// origin); `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree_of(e)).min()
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| degree_of(e) == d).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, v)| (e.clone(), v * c)))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        Self::from_terms(self.nvars, self.terms.iter().chain(other.terms.iter()).map(|(e, c)| (e.clone(), c.clone())))
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let slot = out.entry(e).or_insert_with(Scalar::zero);
                *slot += &(c1 * c2);
            }
        }
        out.retain(|_, c| !c.is_zero());
        Poly { nvars: self.nvars, terms: out }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (x, &k) in point.iter().zip(e) {
                v = &v * &x.pow(k as u64);
            }
            acc += &v;
        }
        acc
    }

    /// Substitute one series per variable; the result has the minimum
    /// precision of the inputs.
    pub fn eval_series(&self, args: &[Series]) -> Series {
        assert_eq!(args.len(), self.nvars);
        let prec = args.iter().map(|s| s.precision()).min().unwrap_or(0);
        let mut cache: Vec<Vec<Series>> = args.iter().map(|s| vec![Series::one(prec), s.clone()]).collect();
        let mut acc = Series::zero(prec);
        for (e, c) in &self.terms {
            let mut term = Series::constant(c.clone(), prec);
            for (k, &p) in e.iter().enumerate() {
                while cache[k].len() <= p as usize {
                    let next = cache[k].last().unwrap().mul(&args[k]);
                    cache[k].push(next);
                }
                if p > 0 {
                    term = term.mul(&cache[k][p as usize]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// `f(x + p)`: moves the point `p` to the origin.
    pub fn translate(&self, p: &[Scalar]) -> Poly {
        assert_eq!(p.len(), self.nvars);
        let shifted: Vec<Poly> =
            (0..self.nvars).map(|k| Poly::var(self.nvars, k).add(&Poly::constant(self.nvars, p[k].clone()))).collect();
        let mut acc = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(self.nvars, c.clone());
            for (k, &d) in e.iter().enumerate() {
                term = term.mul(&shifted[k].pow(d));
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn partial(&self, k: usize) -> Poly {
        Self::from_terms(
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[k] > 0).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[k] -= 1;
                (e2, c * &Scalar::from_int(e[k] as i64))
            }),
        )
    }

    /// Largest power of `x_k` dividing the polynomial.
    pub fn var_valuation(&self, k: usize) -> u32 {
        self.terms.keys().map(|e| e[k]).min().unwrap_or(0)
    }

    /// Divide by `x_k^p`; panics unless exact.
    pub fn div_var_power(&self, k: usize, p: u32) -> Poly {
        assert!(self.var_valuation(k) >= p || self.is_zero());
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[k] -= p;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// The number field of the coefficients, if any coefficient is algebraic.
    pub fn field(&self) -> Option<std::sync::Arc<super::scalar::NumberField>> {
        self.terms.values().find_map(|c| c.field().cloned())
    }

    /// Terms in graded order, lowest degree first.
    pub fn graded_terms(&self) -> Vec<(&Vec<u32>, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| degree_of(a).cmp(&degree_of(b)).then_with(|| b.cmp(a)));
        v
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = var_names(self.nvars);
        let mut first = true;
        for (e, c) in self.graded_terms() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            let mono = mono.join("*");
            let (neg, mag) = match c {
                Scalar::Rat(q) if *q < num_rational::BigRational::zero() => (true, Scalar::Rat(-q)),
                _ => (false, c.clone()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let coef = if mag.is_rational() { mag.to_string() } else { format!("({mag})") };
            if mono.is_empty() {
                write!(f, "{coef}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{coef}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> (Poly, Poly) {
        (Poly::var(2, 0), Poly::var(2, 1))
    }

    #[test]
    fn display_in_graded_order() {
        let (x, y) = xy();
        let cusp = y.pow(2).sub(&x.pow(3));
        assert_eq!(cusp.to_string(), "y^2 - x^3");
        assert_eq!(y.sub(&x.pow(2)).to_string(), "y - x^2");
        assert_eq!(cusp.order(), Some(2));
        assert_eq!(cusp.total_degree(), Some(3));
    }

    #[test]
    fn translation_moves_point() {
        let (x, y) = xy();
        // (x-1)^2 + y^2 - 1 vanishes at (0,0) and (2,0)
        let f = x.sub(&Poly::one(2)).pow(2).add(&y.pow(2)).sub(&Poly::one(2));
        let g = f.translate(&[Scalar::from_int(2), Scalar::zero()]);
        assert!(g.eval(&[Scalar::zero(), Scalar::zero()]).is_zero());
        assert_eq!(g.order(), Some(1));
    }

    #[test]
    fn monomial_order() {
        let m = monomials_up_to(2, 2);
        assert_eq!(m, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials_up_to(3, 3).len(), 20);
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let (x, _) = xy();
        assert!(x.sub(&x).is_zero());
    }
}
