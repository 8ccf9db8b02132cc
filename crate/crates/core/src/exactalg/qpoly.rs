//! Dense univariate polynomials over ℚ, coefficients stored low degree first.
//!
//! This is the ground layer for number-field arithmetic (reduction modulo a
//! minimal polynomial, inverses by extended gcd) and for factorization over ℚ,
//! which in turn drives root finding in the Newton–Puiseux step.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn trimmed(mut p: Vec<Rational>) -> Vec<Rational> {
    trim(&mut p);
    p
}

/// Degree of a trimmed polynomial; `None` for the zero polynomial.
pub fn degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
        let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
        out.push(x + y);
    }
    trimmed(out)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
        let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
        out.push(x - y);
    }
    trimmed(out)
}

pub fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trimmed(out)
}

pub fn scale(a: &[Rational], c: &Rational) -> Vec<Rational> {
    trimmed(a.iter().map(|x| x * c).collect())
}

/// Euclidean division. Panics if `b` is zero.
pub fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead = b[db].clone();
    let mut rem = trimmed(a.to_vec());
    let mut quo = vec![Rational::zero(); rem.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = &rem[dr] / &lead;
        let shift = dr - db;
        for (k, bk) in b.iter().enumerate().take(db + 1) {
            rem[shift + k] -= &c * bk;
        }
        quo[shift] = c;
        trim(&mut rem);
    }
    (trimmed(quo), rem)
}

pub fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    divrem(a, b).1
}

pub fn monic(a: &[Rational]) -> Vec<Rational> {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = a[d].recip();
            scale(a, &inv)
        }
    }
}

/// Monic gcd; the gcd of two zero polynomials is zero.
pub fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = trimmed(a.to_vec());
    let mut y = trimmed(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Returns `(g, s, t)` with `s·a + t·b = g`, `g` monic.
pub fn ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (trimmed(a.to_vec()), trimmed(b.to_vec()));
    let (mut s0, mut s1) = (vec![Rational::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Rational::one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s2 = sub(&s0, &mul(&q, &s1));
        let t2 = sub(&t0, &mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match degree(&r0) {
        None => (Vec::new(), s0, t0),
        Some(d) => {
            let inv = r0[d].recip();
            (scale(&r0, &inv), scale(&s0, &inv), scale(&t0, &inv))
        }
    }
}

pub fn derivative(a: &[Rational]) -> Vec<Rational> {
    trimmed(a.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect())
}

pub fn eval(a: &[Rational], x: &Rational) -> Rational {
    a.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

pub fn is_squarefree(a: &[Rational]) -> bool {
    match degree(a) {
        None => false,
        Some(0) => true,
        Some(_) => degree(&gcd(a, &derivative(a))) == Some(0),
    }
}

/// Lagrange interpolation through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::new();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = mul(&basis, &[-xj.clone(), Rational::one()]);
            denom *= xi - xj;
        }
        out = add(&out, &scale(&basis, &(yi / denom)));
    }
    out
}

/// Determinant of a square rational matrix by fraction-based elimination.
#[allow(clippy::needless_range_loop)]
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let v = &f * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    det
}

/// Yun's squarefree decomposition: returns `(factor, multiplicity)` pairs of
/// monic squarefree, pairwise coprime polynomials.
pub fn squarefree_decomposition(a: &[Rational]) -> Vec<(Vec<Rational>, usize)> {
    let a = monic(a);
    if degree(&a).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let da = derivative(&a);
    let b = gcd(&a, &da);
    let mut c = divrem(&a, &b).0;
    let mut d = sub(&divrem(&da, &b).0, &derivative(&c));
    let mut k = 1;
    while degree(&c).unwrap_or(0) > 0 {
        let g = gcd(&c, &d);
        if degree(&g).unwrap_or(0) > 0 {
            out.push((g.clone(), k));
        }
        c = divrem(&c, &g).0;
        let dy = divrem(&d, &g).0;
        d = sub(&dy, &derivative(&c));
        k += 1;
    }
    out
}

/// Irreducible monic factors over ℚ of a nonzero polynomial, with
/// multiplicities, sorted by degree then by coefficients.
pub fn factor(a: &[Rational]) -> Vec<(Vec<Rational>, usize)> {
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(a) {
        for f in factor_squarefree(&part) {
            out.push((f, mult));
        }
    }
    out.sort_by(|x, y| cmp_poly(&x.0, &y.0));
    out
}

/// Irreducible monic factors of a squarefree polynomial over ℚ.
pub fn factor_squarefree(a: &[Rational]) -> Vec<Vec<Rational>> {
    let ints = primitive_integer(a);
    let mut out: Vec<Vec<Rational>> = factor_integer(ints)
        .into_iter()
        .map(|f| monic(&f.into_iter().map(Rational::from_integer).collect::<Vec<_>>()))
        .collect();
    out.sort_by(|a, b| cmp_poly(a, b));
    out
}

pub fn cmp_poly(a: &[Rational], b: &[Rational]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (x, y) in a.iter().rev().zip(b.iter().rev()) {
            let o = x.cmp(y);
            if o != std::cmp::Ordering::Equal {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// Clear denominators and content; leading coefficient made positive.
fn primitive_integer(a: &[Rational]) -> Vec<BigInt> {
    let a = trimmed(a.to_vec());
    let lcm = a.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = a.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !content.is_zero() {
        for c in ints.iter_mut() {
            *c = &*c / &content;
        }
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        for c in ints.iter_mut() {
            *c = -&*c;
        }
    }
    ints
}

fn int_eval(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn int_degree(p: &[BigInt]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

/// Exact division in ℤ[x]; `None` if `b` does not divide `a`.
fn int_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = int_degree(b);
    let lead = &b[db];
    let mut rem: Vec<BigInt> = a.to_vec();
    let da = int_degree(a);
    if da < db {
        return None;
    }
    let mut quo = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let c = &rem[k + db];
        if c.is_zero() {
            continue;
        }
        if !(c % lead).is_zero() {
            return None;
        }
        let q = c / lead;
        for (i, bi) in b.iter().enumerate().take(db + 1) {
            rem[k + i] -= &q * bi;
        }
        quo[k] = q;
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(quo)
    } else {
        None
    }
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return Vec::new();
    }
    // trial division; inputs at this scale are small
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p.clone(), e));
        }
        p += 1;
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Factor a primitive squarefree integer polynomial into irreducibles:
/// linear factors by the rational root test, the rest by Kronecker's method.
fn factor_integer(p: Vec<BigInt>) -> Vec<Vec<BigInt>> {
    let d = int_degree(&p);
    if d <= 1 {
        return vec![p];
    }
    if p[0].is_zero() {
        let rest = int_div_exact(&p, &[BigInt::zero(), BigInt::one()]).expect("x divides p");
        let mut out = vec![vec![BigInt::zero(), BigInt::one()]];
        out.extend(factor_integer(rest));
        return out;
    }
    for num in positive_divisors(&p[0]) {
        for den in positive_divisors(&p[d]) {
            if !num.gcd(&den).is_one() {
                continue;
            }
            for sign in [1i32, -1] {
                let lin = vec![-(&num * BigInt::from(sign)), den.clone()];
                if let Some(q) = int_div_exact(&p, &lin) {
                    let mut out = vec![lin];
                    out.extend(factor_integer(q));
                    return out;
                }
            }
        }
    }
    for fd in 2..=d / 2 {
        if let Some(g) = kronecker_factor(&p, fd) {
            let q = int_div_exact(&p, &g).expect("kronecker factor divides");
            let mut out = factor_integer(g);
            out.extend(factor_integer(q));
            return out;
        }
    }
    vec![p]
}

/// Search for a factor of exact degree `fd` by interpolating through divisor
/// tuples of `p` evaluated at `fd + 1` integer points.
fn kronecker_factor(p: &[BigInt], fd: usize) -> Option<Vec<BigInt>> {
    let mut candidates: Vec<(BigInt, BigInt, usize)> = Vec::new();
    for k in 0..(4 * fd as i64 + 8) {
        let x = if k % 2 == 0 { BigInt::from(k / 2) } else { BigInt::from(-(k + 1) / 2) };
        let v = int_eval(p, &x);
        if v.is_zero() {
            continue;
        }
        let nd = positive_divisors(&v).len();
        candidates.push((x, v, nd));
    }
    candidates.sort_by_key(|c| c.2);
    candidates.truncate(fd + 1);
    if candidates.len() < fd + 1 {
        return None;
    }
    let xs: Vec<Rational> = candidates.iter().map(|c| Rational::from_integer(c.0.clone())).collect();
    let divs: Vec<Vec<BigInt>> = candidates.iter().map(|c| positive_divisors(&c.1)).collect();
    // mixed-radix counter over divisor choices; the first value keeps a
    // positive sign since g and -g are the same factor
    let radix: Vec<usize> = (0..=fd).map(|k| if k == 0 { divs[k].len() } else { 2 * divs[k].len() }).collect();
    let mut ctr = vec![0usize; fd + 1];
    loop {
        let ys: Vec<Rational> = (0..=fd)
            .map(|k| {
                if k == 0 {
                    Rational::from_integer(divs[0][ctr[0]].clone())
                } else {
                    let d = &divs[k][ctr[k] / 2];
                    Rational::from_integer(if ctr[k].is_multiple_of(2) { d.clone() } else { -d })
                }
            })
            .collect();
        let g = interpolate(&xs, &ys);
        if degree(&g) == Some(fd) && g.iter().all(|c| c.is_integer()) {
            let mut gi: Vec<BigInt> = g.iter().map(|c| c.to_integer()).collect();
            if gi[fd].is_negative() {
                for c in gi.iter_mut() {
                    *c = -&*c;
                }
            }
            if int_div_exact(p, &gi).is_some() {
                return Some(gi);
            }
        }
        let mut k = 0;
        loop {
            if k > fd {
                return None;
            }
            ctr[k] += 1;
            if ctr[k] < radix[k] {
                break;
            }
            ctr[k] = 0;
            k += 1;
        }
    }
}

pub fn to_i64(c: &Rational) -> Option<i64> {
    if c.is_integer() {
        c.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()
    }

    #[test]
    fn factors_products_of_small_polys() {
        // (x^2 + 1)(x^2 + x + 1)(x - 2)
        let p = mul(&mul(&q(&[1, 0, 1]), &q(&[1, 1, 1])), &q(&[-2, 1]));
        let f = factor(&p);
        assert_eq!(f.len(), 3);
        assert_eq!(f[0].0, q(&[-2, 1]));
        assert!(f.iter().any(|(g, _)| *g == q(&[1, 0, 1])));
        assert!(f.iter().any(|(g, _)| *g == q(&[1, 1, 1])));
    }

    #[test]
    fn irreducible_quartic_stays_whole() {
        // x^4 + 1 is irreducible over Q
        let f = factor(&q(&[1, 0, 0, 0, 1]));
        assert_eq!(f.len(), 1);
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
        let f = factor(&q(&[4, 0, 0, 0, 1]));
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn multiplicities_are_reported() {
        let p = mul(&mul(&q(&[-1, 1]), &q(&[-1, 1])), &q(&[3, 1]));
        let f = factor(&p);
        assert_eq!(f, vec![(q(&[-1, 1]), 2), (q(&[3, 1]), 1)]);
    }

    #[test]
    fn ext_gcd_identity() {
        let a = q(&[1, 0, 1]);
        let b = q(&[0, 1, 1]);
        let (g, s, t) = ext_gcd(&a, &b);
        assert_eq!(g, q(&[1]));
        assert_eq!(add(&mul(&s, &a), &mul(&t, &b)), q(&[1]));
    }

    #[test]
    fn determinant_small() {
        let m = vec![q(&[2, 1]), q(&[1, 3])];
        assert_eq!(determinant(m), Rational::from_integer(5.into()));
    }
}
