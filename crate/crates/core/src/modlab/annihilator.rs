use num_traits::Zero;

use super::FiniteModule;
use crate::error::{Error, Result};
use crate::exactalg::poly::monomials_up_to;
use crate::exactalg::{eval_poly_at_matrices, ExactMatrix, Poly, Scalar};

/// {f ∈ Poly_{≤D} : f(A_1, …, A_m) = 0} as a reduced echelon basis over the
/// graded monomial order (1, x, y, x², xy, …), pivots on the lowest monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilatorIdeal {
    pub degree_bound: u32,
    pub basis: Vec<Poly>,
}

impl AnnihilatorIdeal {
    /// Closed under multiplication by each coordinate, up to degree D.
    pub fn is_truncated_ideal(&self, module: &FiniteModule) -> bool {
        let m = module.ambient_dim();
        self.basis.iter().all(|f| {
            f.total_degree().unwrap_or(0) >= self.degree_bound
                || (0..m).all(|k| annihilates(module, &f.mul(&Poly::var(m, k))))
        })
    }
}

/// Evaluation map Poly_{≤D} → End(M), one column per monomial.
fn evaluation_matrix(module: &FiniteModule, monos: &[Vec<u32>]) -> ExactMatrix {
    let d = module.dim();
    let m = module.ambient_dim();
    let mut cols = Vec::with_capacity(monos.len());
    for e in monos {
        let p = Poly::from_terms(m, [(e.clone(), Scalar::from_int(1))]);
        let v = eval_poly_at_matrices(&p, module.actions()).expect("module actions commute");
        cols.push(v.entries().to_vec());
    }
    let mut out = ExactMatrix::zeros(d * d, monos.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            if !x.is_zero() {
                out.set(i, j, x.clone());
            }
        }
    }
    out
}

pub fn annihilator(module: &FiniteModule, degree_bound: u32) -> AnnihilatorIdeal {
    let m = module.ambient_dim();
    let monos = monomials_up_to(m, degree_bound);
    let kernel = evaluation_matrix(module, &monos).nullspace();
    let basis = if kernel.is_empty() {
        Vec::new()
    } else {
        let (r, pivots) = ExactMatrix::from_rows(kernel).rref();
        (0..pivots.len()).map(|i| Poly::from_terms(m, monos.iter().cloned().zip(r.row(i).iter().cloned()))).collect()
    };
    AnnihilatorIdeal { degree_bound, basis }
}

pub fn annihilates(module: &FiniteModule, f: &Poly) -> bool {
    eval_poly_at_matrices(f, module.actions()).expect("module actions commute").is_zero()
}

/// Length of the scheme-theoretic support: the dimension of the image of
/// Poly_{≤D} in End(M), checked to be the same at D = dim and D = dim + 1.
pub fn support_length(module: &FiniteModule) -> Result<usize> {
    let m = module.ambient_dim();
    let d = module.dim() as u32;
    let at = |deg: u32| evaluation_matrix(module, &monomials_up_to(m, deg)).rank();
    let (a, b) = (at(d), at(d + 1));
    if a != b {
        return Err(Error::NoStabilization(format!("image algebra grows from {a} to {b} past degree {d}")));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branches::branch_from_terms;
    use crate::modlab::fiber_module;

    fn fiber(x: &[(usize, i64)], y: &[(usize, i64)], r: usize) -> FiniteModule {
        let conv = |v: &[(usize, i64)]| v.iter().map(|&(e, c)| (e, Scalar::from_int(c))).collect::<Vec<_>>();
        fiber_module(&branch_from_terms(&[conv(x), conv(y)], 24).unwrap(), r).unwrap()
    }

    fn shown(a: &AnnihilatorIdeal) -> Vec<String> {
        a.basis.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn node_branch() {
        let m = fiber(&[(1, 1)], &[], 2);
        let ann = annihilator(&m, 2);
        assert_eq!(shown(&ann), vec!["y", "x^2", "x*y", "y^2"]);
        assert!(ann.is_truncated_ideal(&m));
        assert!(!annihilates(&m, &Poly::var(2, 0)));
        assert_eq!(support_length(&m).unwrap(), 2);
    }

    #[test]
    fn skyscraper_and_cusp() {
        let sky = FiniteModule::skyscraper(2);
        assert_eq!(shown(&annihilator(&sky, 1)), vec!["x", "y"]);
        assert_eq!(support_length(&sky).unwrap(), 1);
        let cusp = fiber(&[(2, 1)], &[(3, 1)], 2);
        assert_eq!(shown(&annihilator(&cusp, 1)), vec!["x", "y"]);
        assert_eq!(support_length(&cusp).unwrap(), 1);
    }

    #[test]
    fn tacnode_rank_three() {
        let m = fiber(&[(1, 1)], &[(2, 1)], 3);
        assert_eq!(shown(&annihilator(&m, 3))[0], "y - x^2");
    }
}
