//! Intersection length as a colength, dim O/(I_i + I_j), for branches in any
//! ambient dimension.
//!
//! Truncating at m^{D+1}: the image of I_i in Poly_{≤D} is the set of h
//! with h(γ_i) in the image of m^{D+1}, and that image contains
//! t^{n(D+1)+c} K[[t]] (c the conductor of the branch), so working modulo
//! such a power of t is exact. The colengths c_D increase with D and the
//! first repeat is the answer (Nakayama).

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::BranchParam;
use crate::error::{Error, Result};
use crate::exactalg::poly::monomials_up_to;
use crate::exactalg::{ExactMatrix, Poly, Scalar, Series};

const MAX_DEGREE: u32 = 64;

/// Vectors kept in echelon form by t-order, each with leading coefficient 1.
#[derive(Default)]
struct Echelon {
    rows: BTreeMap<usize, Vec<Scalar>>,
}

impl Echelon {
    /// Reduce `v` against the stored rows; returns the remainder.
    fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (&p, row) in &self.rows {
            if p >= v.len() || v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row).skip(p) {
                if !r.is_zero() {
                    *x -= &(&c * r);
                }
            }
        }
        v
    }

    /// Insert `v` if it is independent; returns the new row when it was.
    fn insert(&mut self, v: Vec<Scalar>) -> Option<Vec<Scalar>> {
        let v = self.reduce(v);
        let p = v.iter().position(|x| !x.is_zero())?;
        let inv = v[p].inverse().expect("nonzero");
        let v: Vec<Scalar> = v.iter().map(|x| x * &inv).collect();
        self.rows.insert(p, v.clone());
        Some(v)
    }

    fn orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }
}

fn as_vec(s: &Series) -> Vec<Scalar> {
    s.coeffs().to_vec()
}

/// The algebra K[γ] mod t^N, closed under multiplication by coordinates.
fn subalgebra(b: &BranchParam) -> Echelon {
    let n = b.precision();
    let mut ech = Echelon::default();
    let mut queue = vec![ech.insert(as_vec(&Series::one(n))).expect("1 is nonzero")];
    while let Some(v) = queue.pop() {
        let s = Series::from_coeffs(v);
        for x in b.coords() {
            if let Some(new) = ech.insert(as_vec(&s.mul(x))) {
                queue.push(new);
            }
        }
    }
    ech
}

/// Conductor of the value semigroup: the least c with every integer ≥ c a
/// value. Certified once n consecutive values are seen below the precision.
pub fn conductor(b: &BranchParam) -> Result<usize> {
    let n = b.precision();
    let mult = b.multiplicity() as usize;
    let mut present = vec![false; n];
    for o in subalgebra(b).orders() {
        present[o] = true;
    }
    let mut c = n;
    while c > 0 && present[c - 1] {
        c -= 1;
    }
    if n - c < mult {
        return Err(Error::RaiseTruncation(format!("conductor of the branch not visible below t^{n}")));
    }
    Ok(c)
}

/// Image of m^{D+1} in K[[t]] mod t^N, as an echelon basis.
fn power_of_maximal_ideal(b: &BranchParam, algebra: &Echelon, e: u32) -> Echelon {
    let mut cur = Echelon::default();
    for row in algebra.rows.values() {
        cur.insert(row.clone());
    }
    for _ in 0..e {
        let mut next = Echelon::default();
        for row in cur.rows.values() {
            let s = Series::from_coeffs(row.clone());
            for x in b.coords() {
                next.insert(as_vec(&s.mul(x)));
            }
        }
        cur = next;
    }
    cur
}

/// Basis of J(D) = {h ∈ Poly_{≤D} : h(γ) ∈ image of m^{D+1}}.
fn truncated_ideal(b: &BranchParam, monos: &[Vec<u32>], d: u32) -> Vec<Vec<Scalar>> {
    let algebra = subalgebra(b);
    let w = power_of_maximal_ideal(b, &algebra, d + 1);
    let m = b.ambient_dim();
    let cols: Vec<Vec<Scalar>> = monos
        .iter()
        .map(|e| w.reduce(as_vec(&Poly::from_terms(m, [(e.clone(), Scalar::one())]).eval_series(b.coords()))))
        .collect();
    let n = b.precision();
    let rows = (0..n).map(|k| cols.iter().map(|c| c[k].clone()).collect()).collect();
    ExactMatrix::from_rows(rows).nullspace()
}

/// dim O/(I_i + I_j) by stabilization of dim O/(I_i + I_j + m^{D+1}).
pub fn colength(bi: &BranchParam, bj: &BranchParam) -> Result<u64> {
    let m = bi.ambient_dim();
    if bj.ambient_dim() != m {
        return Err(Error::DimensionMismatch("branches live in different ambient spaces".into()));
    }
    let ci = conductor(bi)?;
    let cj = conductor(bj)?;
    let (ni, nj) = (bi.multiplicity() as usize, bj.multiplicity() as usize);
    let have = bi.precision().min(bj.precision());
    let mut prev: u64 = 1;
    for d in 1..=MAX_DEGREE {
        let need = (ni * (d as usize + 1) + ci).max(nj * (d as usize + 1) + cj);
        if need > have {
            return Err(Error::RaiseTruncation(format!("colength at degree {d} needs precision {need}, have {have}")));
        }
        let monos = monomials_up_to(m, d);
        let mut rows = truncated_ideal(&bi.truncate(need), &monos, d);
        rows.extend(truncated_ideal(&bj.truncate(need), &monos, d));
        let rank = if rows.is_empty() { 0 } else { ExactMatrix::from_rows(rows).rank() };
        let c = (monos.len() - rank) as u64;
        if c == prev {
            return Ok(c);
        }
        prev = c;
    }
    Err(Error::NoStabilization(format!("colength did not stabilize by degree {MAX_DEGREE}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branches::{branch_from_terms, intersection_length};

    fn b(coords: &[&[(usize, i64)]], n: usize) -> BranchParam {
        let conv = |v: &[(usize, i64)]| v.iter().map(|&(e, c)| (e, Scalar::from_int(c))).collect::<Vec<_>>();
        branch_from_terms(&coords.iter().map(|c| conv(c)).collect::<Vec<_>>(), n).unwrap()
    }

    #[test]
    fn conductors() {
        assert_eq!(conductor(&b(&[&[(2, 1)], &[(3, 1)]], 32)).unwrap(), 2);
        assert_eq!(conductor(&b(&[&[(3, 1)], &[(4, 1)]], 32)).unwrap(), 6);
        assert_eq!(conductor(&b(&[&[(1, 1)], &[]], 32)).unwrap(), 0);
    }

    #[test]
    fn plane_examples() {
        let axes = (b(&[&[(1, 1)], &[]], 32), b(&[&[], &[(1, 1)]], 32));
        assert_eq!(colength(&axes.0, &axes.1).unwrap(), 1);
        let tac = (b(&[&[(1, 1)], &[(2, 1)]], 32), b(&[&[(1, 1)], &[(2, -1)]], 32));
        assert_eq!(colength(&tac.0, &tac.1).unwrap(), 2);
    }

    #[test]
    fn agrees_with_local_equation() {
        let cusp = b(&[&[(2, 1)], &[(3, 1)]], 48);
        let line = b(&[&[(1, 1)], &[]], 48);
        let parabola = b(&[&[(1, 1)], &[(2, 1), (3, 1)]], 48);
        for (p, q) in [(&cusp, &line), (&cusp, &parabola), (&line, &parabola)] {
            assert_eq!(colength(p, q).unwrap(), intersection_length(p, q).unwrap());
        }
    }

    #[test]
    fn space_curves() {
        // three coordinate axes in 3-space meet pairwise with length 1
        let ax = |k: usize| {
            let mut c: Vec<&[(usize, i64)]> = vec![&[], &[], &[]];
            c[k] = &[(1, 1)];
            b(&c, 32)
        };
        assert_eq!(colength(&ax(0), &ax(1)).unwrap(), 1);
        // (t, t^2, t^3) against (t, -t^2, t^3): first difference at order 2
        let c1 = b(&[&[(1, 1)], &[(2, 1)], &[(3, 1)]], 32);
        let c2 = b(&[&[(1, 1)], &[(2, -1)], &[(3, 1)]], 32);
        assert_eq!(colength(&c1, &c2).unwrap(), 2);
    }
}
