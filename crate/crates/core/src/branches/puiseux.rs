//! Rational Newton–Puiseux: branches of a plane curve germ as parametrizations
//! x = λ·s^P, y = B(s) + c·s^K·h(s), without ever taking p-th roots of field
//! elements.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::BranchParam;
use crate::error::{Error, Result};
use crate::exactalg::scalar::fmt_qpoly;
use crate::exactalg::upoly::roots_in;
use crate::exactalg::{NumberField, Poly, Scalar, Series, UPoly};

/// Branches of the plane curve `f = 0` at `point`, each valid modulo t^N.
///
/// Starts over ℚ (or the field of the coefficients of `f`). The first
/// irreducible factor of degree ≥ 2 met in a characteristic polynomial over ℚ
/// becomes the working field, and the computation restarts once. A nonlinear
/// factor over that field is reported as `UnsupportedFieldExtension`.
pub fn newton_puiseux(f: &Poly, point: &[Scalar], precision: usize) -> Result<Vec<BranchParam>> {
    if f.nvars() != 2 || point.len() != 2 {
        return Err(Error::DimensionMismatch("newton_puiseux needs a plane curve".into()));
    }
    if !f.eval(point).is_zero() {
        return Err(Error::NotOnCurve);
    }
    let g = f.translate(point);
    check_reduced(&g)?;
    let mut field = g.field();
    if field.is_none() {
        field = point.iter().find_map(|c| c.field().cloned());
    }
    loop {
        match attempt(&g, field.as_ref(), precision) {
            Ok(branches) => return Ok(branches),
            Err(Stop::Fail(e)) => return Err(e),
            Err(Stop::NeedField(p)) => match field {
                None => {
                    let q = p.rational_coeffs().expect("rational characteristic polynomial");
                    field = Some(NumberField::new(q)?);
                }
                Some(k) => {
                    return Err(Error::UnsupportedFieldExtension(format!(
                        "characteristic polynomial factor {} does not split over {k}",
                        describe(&p)
                    )))
                }
            },
        }
    }
}

fn describe(p: &UPoly) -> String {
    match p.rational_coeffs() {
        Some(q) => fmt_qpoly(&q, "w"),
        None => format!("of degree {}", p.degree().unwrap_or(0)),
    }
}

enum Stop {
    NeedField(UPoly),
    Fail(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Fail(e)
    }
}

/// Original coordinates in terms of the current ones:
/// x = a·s^pa, y = Σ b_e s^e + c·s^k·y_cur.
#[derive(Clone)]
struct Transform {
    a: Scalar,
    pa: u32,
    b: BTreeMap<u32, Scalar>,
    c: Scalar,
    k: u32,
}

impl Transform {
    fn identity() -> Self {
        Transform { a: Scalar::one(), pa: 1, b: BTreeMap::new(), c: Scalar::one(), k: 0 }
    }

    /// Compose with s_old = λ·s^p, y_old = s^q·(κ + y_new).
    fn step(&self, lambda: &Scalar, kappa: &Scalar, p: u32, q: u32) -> Self {
        let mut b: BTreeMap<u32, Scalar> = self.b.iter().map(|(&e, v)| (p * e, v * &lambda.pow(e as u64))).collect();
        let c = &self.c * &lambda.pow(self.k as u64);
        let k = p * self.k + q;
        let slot = b.entry(k).or_insert_with(Scalar::zero);
        *slot += &(&c * kappa);
        b.retain(|_, v| !v.is_zero());
        Transform { a: &self.a * &lambda.pow(self.pa as u64), pa: p * self.pa, b, c, k }
    }

    fn branch(&self, h: Option<&Series>, n: usize) -> Result<BranchParam> {
        let x = Series::monomial(self.a.clone(), self.pa as usize, n);
        let mut y = Series::from_terms(self.b.iter().map(|(&e, v)| (e as usize, v.clone())), n);
        if let Some(h) = h {
            y = y.add(&h.scale(&self.c).shift(self.k as usize));
        }
        BranchParam::new(vec![x, y]).map_err(|e| match e {
            Error::DegenerateBranch(why) => Error::RaiseTruncation(why),
            other => other,
        })
    }
}

fn attempt(f: &Poly, field: Option<&Arc<NumberField>>, n: usize) -> std::result::Result<Vec<BranchParam>, Stop> {
    let mut out = Vec::new();
    let mut g = f.clone();
    let x_branch = g.var_valuation(0) > 0;
    if x_branch {
        g = g.div_var_power(0, 1);
    }
    solve(&g, &Transform::identity(), field, n, &mut out)?;
    if x_branch {
        out.push(BranchParam::new(vec![Series::zero(n), Series::variable(n)])?);
    }
    Ok(out)
}

fn solve(
    g: &Poly,
    tr: &Transform,
    field: Option<&Arc<NumberField>>,
    n: usize,
    out: &mut Vec<BranchParam>,
) -> std::result::Result<(), Stop> {
    let mut g = g.clone();
    if g.var_valuation(1) > 0 {
        out.push(tr.branch(None, n)?);
        g = g.div_var_power(1, 1);
        if g.var_valuation(1) > 0 {
            return Err(Error::NotReduced("repeated branch".into()).into());
        }
    }
    // d = ord_y g(0, y)
    let Some(d) = g.terms().filter(|(e, _)| e[0] == 0).map(|(e, _)| e[1]).min() else {
        return Err(Error::NotReduced("repeated component through the point".into()).into());
    };
    if d == 0 {
        return Ok(());
    }
    if d == 1 {
        let h = implicit_root(&g, n)?;
        out.push(tr.branch(Some(&h), n)?);
        return Ok(());
    }
    for edge in newton_edges(&g, d) {
        let psi = UPoly::new({
            let len = ((edge.j_start - edge.j_end) / edge.p + 1) as usize;
            let mut c = vec![Scalar::zero(); len];
            for (_, j, a) in &edge.terms {
                c[((j - edge.j_end) / edge.p) as usize] = a.clone();
            }
            c
        });
        let (roots, rest) = roots_in(&psi, field);
        if let Some(r) = rest.into_iter().next() {
            return Err(Stop::NeedField(r));
        }
        let (ea, eb) = bezout_exponents(edge.p, edge.q);
        for w in roots {
            let lambda = w.pow(eb as u64);
            let kappa = w.pow(ea as u64);
            let g1 = substitute(&g, &lambda, &kappa, edge.p, edge.q, edge.m);
            solve(&g1, &tr.step(&lambda, &kappa, edge.p, edge.q), field, n, out)?;
        }
    }
    Ok(())
}

/// a, b ≥ 0 with a·p − b·q = 1.
fn bezout_exponents(p: u32, q: u32) -> (u32, u32) {
    let a = (1..=q).find(|a| (a * p) % q == 1 % q).expect("gcd(p, q) = 1");
    (a, (a * p - 1) / q)
}

struct Edge {
    p: u32,
    q: u32,
    m: u64,
    j_start: u32,
    j_end: u32,
    terms: Vec<(u32, u32, Scalar)>,
}

/// Edges of the Newton polygon from (0, d) down to the i-axis, by increasing
/// slope q/p (the exponent in y ~ x^{q/p}).
fn newton_edges(g: &Poly, d: u32) -> Vec<Edge> {
    let pts: Vec<(u32, u32)> = g.terms().map(|(e, _)| (e[0], e[1])).collect();
    let mut edges = Vec::new();
    let mut cur = (0u32, d);
    while cur.1 > 0 {
        let mut best: Option<(u32, u32)> = None;
        for &(i, j) in pts.iter().filter(|&&(_, j)| j < cur.1) {
            best = match best {
                None => Some((i, j)),
                Some((bi, bj)) => {
                    // compare (i - ci)/(cj - j) with (bi - ci)/(cj - bj)
                    let lhs = (i - cur.0) as u64 * (cur.1 - bj) as u64;
                    let rhs = (bi - cur.0) as u64 * (cur.1 - j) as u64;
                    if lhs < rhs || (lhs == rhs && j < bj) {
                        Some((i, j))
                    } else {
                        Some((bi, bj))
                    }
                }
            };
        }
        let next = best.expect("g(x, 0) is nonzero when y does not divide g");
        let di = next.0 - cur.0;
        let dj = cur.1 - next.1;
        let gg = di.gcd(&dj);
        let (q, p) = (di / gg, dj / gg);
        let m = p as u64 * cur.0 as u64 + q as u64 * cur.1 as u64;
        let terms = g
            .terms()
            .filter(|(e, _)| p as u64 * e[0] as u64 + q as u64 * e[1] as u64 == m)
            .map(|(e, c)| (e[0], e[1], c.clone()))
            .collect();
        edges.push(Edge { p, q, m, j_start: cur.1, j_end: next.1, terms });
        cur = next;
    }
    edges
}

/// g(λ s^p, s^q (κ + y)) / s^m.
fn substitute(g: &Poly, lambda: &Scalar, kappa: &Scalar, p: u32, q: u32, m: u64) -> Poly {
    let mut terms = Vec::new();
    for (e, c) in g.terms() {
        let (i, j) = (e[0], e[1]);
        let sdeg = (p as u64 * i as u64 + q as u64 * j as u64 - m) as u32;
        let base = c * &lambda.pow(i as u64);
        // (κ + y)^j by the binomial theorem
        let mut binom = Scalar::one();
        for l in 0..=j {
            let coef = &(&base * &binom) * &kappa.pow((j - l) as u64);
            terms.push((vec![sdeg, l], coef));
            binom = &(&binom * &Scalar::from_int((j - l) as i64)) / &Scalar::from_int((l + 1) as i64);
        }
    }
    Poly::from_terms(2, terms)
}

/// The unique series root y = h(x), h(0) = 0, when ∂g/∂y(0, 0) ≠ 0, by
/// Newton iteration.
fn implicit_root(g: &Poly, n: usize) -> Result<Series> {
    let s = Series::variable(n);
    let gy = g.partial(1);
    let mut h = Series::zero(n);
    for _ in 0..2 * (usize::BITS - n.leading_zeros()) + 4 {
        let r = g.eval_series(&[s.clone(), h.clone()]);
        if r.is_zero_at_precision() {
            return Ok(h);
        }
        let d = gy.eval_series(&[s.clone(), h.clone()]).inverse()?;
        h = h.sub(&r.mul(&d));
    }
    Err(Error::NoStabilization("implicit function iteration".into()))
}

/// Squarefreeness of a bivariate polynomial by specialization.
///
/// If h² divides f with h nonconstant, then h(x0, y)² divides f(x0, y)
/// whenever the leading y-coefficient survives, and symmetrically in x. Conversely
/// a squarefree f stays squarefree at all but finitely many x0 (bounded by
/// the degree of a discriminant), so trying that many points is conclusive.
pub fn check_reduced(f: &Poly) -> Result<()> {
    if f.is_zero() {
        return Err(Error::NotReduced("zero polynomial".into()));
    }
    let deg = f.total_degree().unwrap_or(0) as i64;
    let tries = 2 * deg * deg + deg + 2;
    for var in 0..2 {
        let other = 1 - var;
        let top = f.terms().map(|(e, _)| e[other]).max().unwrap_or(0);
        if top == 0 {
            continue;
        }
        let mut ok = false;
        for k in 0..tries {
            let v = Scalar::from_int(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 });
            let mut coeffs = vec![Scalar::zero(); top as usize + 1];
            for (e, c) in f.terms() {
                coeffs[e[other] as usize] += &(c * &v.pow(e[var] as u64));
            }
            let u = UPoly::new(coeffs);
            if u.degree() != Some(top as usize) {
                continue;
            }
            if u.gcd(&u.derivative()).degree() == Some(0) {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::NotReduced(format!("{f} has a repeated factor")));
        }
    }
    Ok(())
}
