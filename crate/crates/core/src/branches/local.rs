//! Local equations of plane branches and intersection lengths.
//!
//! For a branch with coordinate u of least order n, reparametrize so that
//! u = λ·σ^n. Then K[[u]][σ]/(σ^n − u/λ) is free of rank n over K[[u]], and
//! G(u, z) = det(z − mult. by v(σ)) is the local equation of the branch,
//! monic of degree n in z.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::colength::colength;
use super::BranchParam;
use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, Order, Poly, Scalar, Series};

/// G(u, z) = Σ_k coeffs[k](u)·z^k, exact modulo u^precision.
#[derive(Clone, Debug)]
pub struct LocalEquation {
    /// Ambient index of the coordinate playing the role of u.
    pub u_index: usize,
    pub v_index: usize,
    pub coeffs: Vec<Series>,
    /// Precision of the coefficient series, in powers of u.
    pub precision: usize,
}

impl LocalEquation {
    #[allow(clippy::needless_range_loop)]
    pub fn of(b: &BranchParam) -> Result<Self> {
        if b.ambient_dim() != 2 {
            return Err(Error::DimensionMismatch("local equations are for plane branches".into()));
        }
        let u_index = b.min_order_coordinate();
        let v_index = 1 - u_index;
        let u = b.coord(u_index);
        let n = b.multiplicity() as usize;
        let lambda = u.coeff(n);
        let inv_lambda = lambda.inverse().expect("leading coefficient");
        // u = λ s^n w(s) with w(0) = 1; σ = s·w^{1/n} gives u = λ σ^n
        let w = u.unshift(n).scale(&inv_lambda);
        let root = w.pow_rational(&BigRational::new(1.into(), (n as i64).into()))?;
        let sigma = Series::from_coeffs(std::iter::once(Scalar::zero()).chain(root.coeffs().iter().cloned()).collect());
        let s_of_sigma = sigma.reversion()?;
        let v = b.coord(v_index).compose(&s_of_sigma)?;
        let prec_sigma = v.precision();
        let precision = prec_sigma / n;
        // M[i][r]: coefficient of σ^i in v(σ)·σ^r, as a series in u
        let mut m = vec![vec![Series::zero(precision); n]; n];
        for r in 0..n {
            for (k, c) in v.terms() {
                let e = k + r;
                let (row, upow) = (e % n, e / n);
                if upow < precision {
                    let add = Series::monomial(c * &inv_lambda.pow(upow as u64), upow, precision);
                    let cell = &mut m[row][r];
                    *cell = cell.add(&add);
                }
            }
        }
        let coeffs = charpoly(&m, precision);
        Ok(LocalEquation { u_index, v_index, coeffs, precision })
    }

    /// G(x_u(t), x_v(t)) for another branch, with the t-order up to which
    /// the result is reliable.
    pub fn evaluate_on(&self, other: &BranchParam) -> Result<(Series, usize)> {
        let u = other.coord(self.u_index);
        let v = other.coord(self.v_index);
        let mut acc = Series::zero(other.precision());
        let mut vpow = Series::one(other.precision());
        for c in &self.coeffs {
            acc = acc.add(&c.compose(u)?.mul(&vpow));
            vpow = vpow.mul(v);
        }
        let reliable = match u.ord() {
            Order::Finite(k) => (self.precision * k).min(other.precision()),
            Order::ZeroAtPrecision => other.precision(),
        };
        Ok((acc, reliable))
    }

    /// The truncated equation as a polynomial in the ambient coordinates.
    pub fn to_poly(&self) -> Poly {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            for (e, a) in c.terms() {
                let mut exp = vec![0u32; 2];
                exp[self.u_index] = e as u32;
                exp[self.v_index] = k as u32;
                terms.push((exp, a.clone()));
            }
        }
        Poly::from_terms(2, terms)
    }
}

/// Characteristic polynomial det(z·I − M) over series, by Faddeev–LeVerrier.
fn charpoly(m: &[Vec<Series>], precision: usize) -> Vec<Series> {
    let n = m.len();
    let mut c = vec![Series::zero(precision); n + 1];
    c[n] = Series::one(precision);
    let mut mk = vec![vec![Series::zero(precision); n]; n];
    for k in 1..=n {
        // mk = M·mk + c[n-k+1]·I
        let mut next = vec![vec![Series::zero(precision); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Series::zero(precision);
                for l in 0..n {
                    acc = acc.add(&m[i][l].mul(&mk[l][j]));
                }
                if i == j {
                    acc = acc.add(&c[n - k + 1]);
                }
                next[i][j] = acc;
            }
        }
        mk = next;
        let mut tr = Series::zero(precision);
        for i in 0..n {
            for l in 0..n {
                tr = tr.add(&m[i][l].mul(&mk[l][i]));
            }
        }
        c[n - k] = tr.scale(&Scalar::from_ratio(-1, k as i64));
    }
    c
}

/// Irreducible local equation of a plane branch as a polynomial of total
/// degree at most `degree_bound`.
pub fn implicit_equation(b: &BranchParam, degree_bound: usize) -> Result<Poly> {
    let eq = LocalEquation::of(b)?;
    let p = eq.to_poly();
    let found = p.total_degree().unwrap_or(0) as usize;
    if found <= degree_bound && p.eval_series(b.coords()).is_zero_at_precision() {
        return Ok(normalize(&p));
    }
    // The Weierstrass form is a series; look for a polynomial multiple of it.
    least_degree_relation(b, degree_bound)?
        .ok_or(Error::DegreeBoundExceeded { bound: degree_bound, found: found.max(degree_bound + 1) })
}

/// Scale so the first term in graded order has coefficient 1.
fn normalize(p: &Poly) -> Poly {
    match p.graded_terms().first() {
        Some((_, c)) => p.scale(&c.inverse().expect("nonzero")),
        None => p.clone(),
    }
}

/// The polynomial of least degree ≤ `bound` vanishing on the branch mod t^N.
///
/// A polynomial h not vanishing on an algebraic branch of degree e meets it
/// with multiplicity at most deg(h)·e, so for N > bound² a relation found
/// mod t^N is a genuine one.
fn least_degree_relation(b: &BranchParam, bound: usize) -> Result<Option<Poly>> {
    let n = b.precision();
    if n <= bound * bound {
        return Err(Error::RaiseTruncation(format!(
            "need precision above {} to certify a relation of degree {bound}",
            bound * bound
        )));
    }
    for d in 1..=bound as u32 {
        let monos = crate::exactalg::poly::monomials_up_to(2, d);
        let cols: Vec<Series> =
            monos.iter().map(|e| Poly::from_terms(2, [(e.clone(), Scalar::one())]).eval_series(b.coords())).collect();
        let rows = (0..n).map(|k| cols.iter().map(|c| c.coeff(k)).collect()).collect();
        let kernel = ExactMatrix::from_rows(rows).nullspace();
        match kernel.len() {
            0 => continue,
            1 => {
                let p = Poly::from_terms(2, monos.into_iter().zip(kernel[0].iter().cloned()));
                return Ok(Some(normalize(&p)));
            }
            _ => {
                return Err(Error::RaiseTruncation(format!("relations of degree {d} are not unique at precision {n}")))
            }
        }
    }
    Ok(None)
}

/// l_ij: ord_t of the local equation of one branch along the other for plane
/// branches, the colength of the sum of the branch ideals otherwise.
pub fn intersection_length(bi: &BranchParam, bj: &BranchParam) -> Result<u64> {
    if bi.ambient_dim() != bj.ambient_dim() {
        return Err(Error::DimensionMismatch("branches live in different ambient spaces".into()));
    }
    if bi.ambient_dim() != 2 {
        return colength(bi, bj);
    }
    let eq = LocalEquation::of(bj)?;
    let (val, reliable) = eq.evaluate_on(bi)?;
    match val.ord() {
        Order::Finite(k) if k < reliable => Ok(k as u64),
        _ => Err(Error::RaiseTruncation(format!("intersection length not determined below t^{reliable}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branches::branch_from_terms;

    fn b(x: &[(usize, i64)], y: &[(usize, i64)], n: usize) -> BranchParam {
        let conv = |v: &[(usize, i64)]| v.iter().map(|&(e, c)| (e, Scalar::from_int(c))).collect::<Vec<_>>();
        branch_from_terms(&[conv(x), conv(y)], n).unwrap()
    }

    #[test]
    fn equations_of_simple_branches() {
        assert_eq!(implicit_equation(&b(&[(1, 1)], &[(2, 1)], 16), 4).unwrap().to_string(), "y - x^2");
        assert_eq!(implicit_equation(&b(&[(2, 1)], &[(3, 1)], 16), 4).unwrap().to_string(), "y^2 - x^3");
        assert_eq!(implicit_equation(&b(&[(1, 1)], &[], 16), 4).unwrap().to_string(), "y");
        assert_eq!(implicit_equation(&b(&[(3, 1)], &[(2, 1)], 16), 4).unwrap().to_string(), "x^2 - y^3");
    }

    #[test]
    fn degree_bound_reported() {
        let e = implicit_equation(&b(&[(2, 1)], &[(3, 1)], 16), 2).unwrap_err();
        assert_eq!(e, Error::DegreeBoundExceeded { bound: 2, found: 3 });
    }

    #[test]
    fn non_monomial_base_coordinate() {
        // x = t + t^2, y = t^2 satisfies y = (x - y)^2
        let br = b(&[(1, 1), (2, 1)], &[(2, 1)], 40);
        let p = implicit_equation(&br, 4).unwrap();
        assert_eq!(p.to_string(), "y - x^2 + 2*x*y - y^2");
    }

    #[test]
    fn lengths() {
        let axes = (b(&[(1, 1)], &[], 16), b(&[], &[(1, 1)], 16));
        assert_eq!(intersection_length(&axes.0, &axes.1).unwrap(), 1);
        let tac = (b(&[(1, 1)], &[(2, 1)], 16), b(&[(1, 1)], &[(2, -1)], 16));
        assert_eq!(intersection_length(&tac.0, &tac.1).unwrap(), 2);
        let lines = (b(&[(1, 1)], &[], 16), b(&[(1, 1)], &[(1, 1)], 16));
        assert_eq!(intersection_length(&lines.0, &lines.1).unwrap(), 1);
        // cusp against its tangent line y = 0: ord t^3
        let cusp = b(&[(2, 1)], &[(3, 1)], 16);
        assert_eq!(intersection_length(&cusp, &axes.0).unwrap(), 3);
        assert_eq!(intersection_length(&axes.0, &cusp).unwrap(), 3);
    }

    #[test]
    fn identical_branches_need_more_truncation() {
        let a = b(&[(1, 1)], &[(2, 1)], 16);
        assert!(matches!(intersection_length(&a, &a), Err(Error::RaiseTruncation(_))));
    }
}
