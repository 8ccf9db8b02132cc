//! Branch decomposition of a curve germ and the invariants built from it:
//! branch multiplicities, pairwise intersection lengths, bii, l0 and r0.

mod colength;
mod local;
mod puiseux;

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{Order, Scalar, Series};

pub use colength::{colength, conductor};
pub use local::{implicit_equation, intersection_length, LocalEquation};
pub use puiseux::{check_reduced, newton_puiseux};

/// One branch t ↦ (x_1(t), …, x_m(t)) of a germ at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchParam {
    coords: Vec<Series>,
}

impl BranchParam {
    /// Coordinates are truncated to their common precision. Every coordinate
    /// must vanish at t = 0, at least one must be nonzero, and the exponents
    /// appearing must have gcd 1.
    pub fn new(coords: Vec<Series>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidArgument("a branch needs at least two coordinates".into()));
        }
        let n = coords.iter().map(|s| s.precision()).min().unwrap_or(0);
        let coords: Vec<Series> = coords.iter().map(|s| s.truncate(n)).collect();
        if coords.iter().any(|s| !s.coeff(0).is_zero()) {
            return Err(Error::DegenerateBranch("branch does not pass through the origin".into()));
        }
        if coords.iter().all(|s| s.is_zero_at_precision()) {
            return Err(Error::DegenerateBranch(format!("all coordinates vanish mod t^{n}")));
        }
        let g = coords.iter().flat_map(|s| s.terms().map(|(e, _)| e)).fold(0usize, |acc, e| acc.gcd(&e));
        if g != 1 {
            return Err(Error::DegenerateBranch(format!(
                "parametrization is not primitive (all exponents divisible by {g})"
            )));
        }
        Ok(BranchParam { coords })
    }

    pub fn coords(&self) -> &[Series] {
        &self.coords
    }

    pub fn coord(&self, k: usize) -> &Series {
        &self.coords[k]
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn precision(&self) -> usize {
        self.coords[0].precision()
    }

    pub fn orders(&self) -> Vec<Order> {
        self.coords.iter().map(|s| s.ord()).collect()
    }

    /// n = min_k ord x_k(t).
    pub fn multiplicity(&self) -> u32 {
        self.orders().into_iter().filter_map(Order::finite).min().expect("checked in constructor") as u32
    }

    /// Index of the coordinate of least order, ties to the lowest index.
    pub fn min_order_coordinate(&self) -> usize {
        let ords = self.orders();
        (0..ords.len()).min_by_key(|&k| ords[k]).expect("nonempty")
    }

    pub fn truncate(&self, precision: usize) -> Self {
        BranchParam { coords: self.coords.iter().map(|s| s.truncate(precision)).collect() }
    }

    /// Substitute t ↦ t·u(t) for a unit u.
    pub fn reparametrize(&self, unit: &Series) -> Result<Self> {
        if unit.coeff(0).is_zero() {
            return Err(Error::NonUnit(unit.ord().finite().unwrap_or(unit.precision())));
        }
        let phi = unit.shift(1);
        let coords = self.coords.iter().map(|s| s.compose(&phi)).collect::<Result<Vec<_>>>()?;
        BranchParam::new(coords)
    }

    /// Whether x_k(t) has a coefficient outside ℚ.
    pub fn is_rational(&self) -> bool {
        self.coords.iter().all(|s| s.coeffs().iter().all(|c| c.is_rational()))
    }
}

impl fmt::Display for BranchParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|s| {
                let full = s.to_string();
                full.rsplit_once(" + O(").map_or(full.clone(), |(head, _)| head.to_string())
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn branch_multiplicity(b: &BranchParam) -> Result<u32> {
    Ok(b.multiplicity())
}

/// A singular point together with its branches and derived invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Germ {
    /// The point in the original coordinates; branches are centered at 0.
    pub point: Vec<Scalar>,
    pub branches: Vec<BranchParam>,
    pub n: Vec<u32>,
    /// Symmetric; the diagonal is `None`.
    pub l_matrix: Vec<Vec<Option<u64>>>,
    pub bii: Option<u64>,
    pub l0: u64,
    pub r0: u64,
}

impl Germ {
    /// Multibranch, or some branch of multiplicity ≥ 2.
    pub fn is_singular(&self) -> bool {
        self.branches.len() >= 2 || self.n.iter().any(|&n| n >= 2)
    }

    pub fn lcm_n(&self) -> u64 {
        self.n.iter().fold(1u64, |acc, &n| acc.lcm(&(n as u64)))
    }

    pub fn ambient_dim(&self) -> usize {
        self.branches[0].ambient_dim()
    }
}

pub fn germ_invariants(branches: Vec<BranchParam>, point: Vec<Scalar>) -> Result<Germ> {
    let Some(first) = branches.first() else {
        return Err(Error::InvalidArgument("a germ needs at least one branch".into()));
    };
    let m = first.ambient_dim();
    if branches.iter().any(|b| b.ambient_dim() != m) || point.len() != m {
        return Err(Error::DimensionMismatch("branches and point must share the ambient dimension".into()));
    }
    let k = branches.len();
    let n: Vec<u32> = branches.iter().map(|b| b.multiplicity()).collect();
    let mut l_matrix = vec![vec![None; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let l = intersection_length(&branches[i], &branches[j])?;
            l_matrix[i][j] = Some(l);
            l_matrix[j][i] = Some(l);
        }
    }
    let bii = l_matrix.iter().flatten().flatten().copied().max();
    let l0 = bii.map_or(1, |b| b + 1);
    let lcm = n.iter().fold(1u64, |acc, &x| acc.lcm(&(x as u64)));
    Ok(Germ { point, branches, n, l_matrix, bii, l0, r0: l0 * lcm })
}

/// Build a branch from sparse `(exponent, coefficient)` lists, one per coordinate.
pub fn branch_from_terms(terms: &[Vec<(usize, Scalar)>], precision: usize) -> Result<BranchParam> {
    BranchParam::new(terms.iter().map(|t| Series::from_terms(t.iter().cloned(), precision)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: &[(usize, i64)], y: &[(usize, i64)]) -> BranchParam {
        let conv = |v: &[(usize, i64)]| v.iter().map(|&(e, c)| (e, Scalar::from_int(c))).collect::<Vec<_>>();
        branch_from_terms(&[conv(x), conv(y)], 32).unwrap()
    }

    #[test]
    fn multiplicities() {
        assert_eq!(b(&[(2, 1)], &[(3, 1)]).multiplicity(), 2);
        assert_eq!(b(&[(1, 1)], &[]).multiplicity(), 1);
        assert_eq!(b(&[(3, 1)], &[(4, 1)]).multiplicity(), 3);
    }

    #[test]
    fn rejects_bad_branches() {
        let conv = |v: &[(usize, i64)]| v.iter().map(|&(e, c)| (e, Scalar::from_int(c))).collect::<Vec<_>>();
        assert!(branch_from_terms(&[conv(&[(2, 1)]), conv(&[(4, 1)])], 16).is_err());
        assert!(branch_from_terms(&[conv(&[]), conv(&[])], 16).is_err());
        assert!(branch_from_terms(&[conv(&[(0, 1), (1, 1)]), conv(&[(1, 1)])], 16).is_err());
    }

    #[test]
    fn node_cusp_tacnode_invariants() {
        let node = germ_invariants(vec![b(&[(1, 1)], &[]), b(&[], &[(1, 1)])], vec![Scalar::zero(); 2]).unwrap();
        assert_eq!((node.n.clone(), node.bii, node.l0, node.r0), (vec![1, 1], Some(1), 2, 2));
        let cusp = germ_invariants(vec![b(&[(2, 1)], &[(3, 1)])], vec![Scalar::zero(); 2]).unwrap();
        assert_eq!((cusp.n.clone(), cusp.bii, cusp.l0, cusp.r0), (vec![2], None, 1, 2));
        let tac =
            germ_invariants(vec![b(&[(1, 1)], &[(2, 1)]), b(&[(1, 1)], &[(2, -1)])], vec![Scalar::zero(); 2]).unwrap();
        assert_eq!((tac.bii, tac.l0, tac.r0), (Some(2), 3, 3));
    }

    #[test]
    fn display_drops_error_term() {
        assert_eq!(b(&[(2, 1)], &[(3, -2)]).to_string(), "(t^2, -2*t^3)");
    }
}
