//! Finite-length modules over the ambient local ring, presented by one
//! commuting nilpotent action matrix per coordinate.

mod annihilator;

use num_traits::{One, Zero};

use crate::branches::BranchParam;
use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, Scalar, Series};

pub use annihilator::{annihilates, annihilator, support_length, AnnihilatorIdeal};

/// A module of dimension d with actions A_1, …, A_m, supported at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModule {
    dim: usize,
    actions: Vec<ExactMatrix>,
}

impl FiniteModule {
    /// Checks shapes, pairwise commutation and nilpotency.
    pub fn new(dim: usize, actions: Vec<ExactMatrix>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("module dimension must be positive".into()));
        }
        for a in &actions {
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "action is {}x{}, module has dimension {dim}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        for i in 0..actions.len() {
            for j in i + 1..actions.len() {
                if !actions[i].commutes(&actions[j]) {
                    return Err(Error::NonCommuting(i, j));
                }
            }
        }
        for (k, a) in actions.iter().enumerate() {
            if a.nilpotency_index().is_none() {
                return Err(Error::NotNilpotent(format!("action of coordinate {k}")));
            }
        }
        Ok(FiniteModule { dim, actions })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn actions(&self) -> &[ExactMatrix] {
        &self.actions
    }

    pub fn action(&self, k: usize) -> &ExactMatrix {
        &self.actions[k]
    }

    pub fn ambient_dim(&self) -> usize {
        self.actions.len()
    }

    /// The one-dimensional module O/m.
    pub fn skyscraper(ambient_dim: usize) -> Self {
        FiniteModule { dim: 1, actions: vec![ExactMatrix::zeros(1, 1); ambient_dim] }
    }

    /// Direct sum, block-diagonal in the given order.
    pub fn direct_sum(parts: &[&FiniteModule]) -> Result<Self> {
        let m = parts.first().map_or(0, |p| p.ambient_dim());
        if parts.iter().any(|p| p.ambient_dim() != m) {
            return Err(Error::DimensionMismatch("summands have different ambient dimensions".into()));
        }
        let actions =
            (0..m).map(|k| ExactMatrix::block_diag(&parts.iter().map(|p| &p.actions[k]).collect::<Vec<_>>())).collect();
        Ok(FiniteModule { dim: parts.iter().map(|p| p.dim).sum(), actions })
    }
}

/// Matrix of multiplication by `s` on K[t]/t^r in the basis 1, t, …, t^{r−1}.
pub fn multiplication_matrix(s: &Series, r: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..=i {
            m.set(i, j, s.coeff(i - j));
        }
    }
    m
}

/// The fiber K[t]/(t^r) with x_k acting by multiplication by x_k(t).
pub fn fiber_module(b: &BranchParam, r: usize) -> Result<FiniteModule> {
    if r == 0 {
        return Err(Error::InvalidArgument("rank must be positive".into()));
    }
    if b.precision() < r {
        return Err(Error::RaiseTruncation(format!("fiber of rank {r} needs precision {r}, have {}", b.precision())));
    }
    FiniteModule::new(r, b.coords().iter().map(|s| multiplication_matrix(s, r)).collect())
}

/// F_l = O/(u^{n·l}) along the branch, i.e. the fiber of rank n·l.
pub fn branch_quotient(b: &BranchParam, l: usize) -> Result<FiniteModule> {
    fiber_module(b, b.multiplicity() as usize * l)
}

/// An extension 0 → M1 → M2 → M1 → 0 of modules over the dual numbers.
///
/// M2 is stored flattened: its first half is a copy of M1 and its second half
/// the ε-multiples, so ε = [[0, 0], [I, 0]].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetPair {
    pub m1: FiniteModule,
    pub m2: FiniteModule,
    pub eps: ExactMatrix,
    /// Inclusion M1 → M2 (multiplication by ε).
    pub a: ExactMatrix,
    /// Quotient M2 → M1 = M2/εM2.
    pub b: ExactMatrix,
}

fn eps_matrices(d: usize) -> (ExactMatrix, ExactMatrix, ExactMatrix) {
    let mut eps = ExactMatrix::zeros(2 * d, 2 * d);
    let mut a = ExactMatrix::zeros(2 * d, d);
    let mut b = ExactMatrix::zeros(d, 2 * d);
    for i in 0..d {
        eps.set(d + i, i, Scalar::one());
        a.set(d + i, i, Scalar::one());
        b.set(i, i, Scalar::one());
    }
    (eps, a, b)
}

/// t2 on M1: the r×r down-shift.
pub fn t2_on_m1(r: usize) -> ExactMatrix {
    ExactMatrix::shift(r)
}

/// t2 on M2 over K[ε]: the down-shift plus r·ε in the last diagonal entry,
/// flattened to 2r×2r.
pub fn t2_on_m2(r: usize) -> ExactMatrix {
    let s = ExactMatrix::shift(r);
    let mut m = ExactMatrix::block_diag(&[&s, &s]);
    m.set(2 * r - 1, r - 1, Scalar::from_int(r as i64));
    m
}

/// Σ_e c_e·T^e for a nilpotent T of index ≤ precision of `s`.
fn series_at_matrix(s: &Series, t: &ExactMatrix) -> ExactMatrix {
    let n = t.rows();
    let mut acc = ExactMatrix::zeros(n, n);
    let mut pow = ExactMatrix::identity(n);
    for e in 0..s.precision() {
        if pow.is_zero() {
            break;
        }
        let c = s.coeff(e);
        if !c.is_zero() {
            acc = acc.add(&pow.scale(&c));
        }
        pow = pow.mul(t);
    }
    acc
}

/// The jet pair of rank r: coordinate actions x_k(t2) on M1 and on M2.
pub fn jet_pair(b: &BranchParam, r: usize) -> Result<JetPair> {
    if r == 0 {
        return Err(Error::InvalidArgument("rank must be positive".into()));
    }
    if b.precision() < r + 1 {
        return Err(Error::RaiseTruncation(format!(
            "jet pair of rank {r} needs precision {}, have {}",
            r + 1,
            b.precision()
        )));
    }
    let (t1, t2) = (t2_on_m1(r), t2_on_m2(r));
    let m1 = FiniteModule::new(r, b.coords().iter().map(|s| series_at_matrix(s, &t1)).collect())?;
    let m2 = FiniteModule::new(2 * r, b.coords().iter().map(|s| series_at_matrix(s, &t2)).collect())?;
    let (eps, a, bq) = eps_matrices(r);
    Ok(JetPair { m1, m2, eps, a, b: bq })
}

/// The skyscraper at the image point and its jet: on the dual-number module,
/// x_k acts by (coefficient of t in x_k)·ε.
pub fn graph_skyscraper(b: &BranchParam) -> (FiniteModule, JetPair) {
    let m = b.ambient_dim();
    let sky = FiniteModule::skyscraper(m);
    let (eps, a, bq) = eps_matrices(1);
    let actions = b.coords().iter().map(|s| eps.scale(&s.coeff(1))).collect();
    let m2 = FiniteModule { dim: 2, actions };
    (sky.clone(), JetPair { m1: sky, m2, eps, a, b: bq })
}

/// base ⊕ filler^{⊕copies}.
pub fn pad(base: &FiniteModule, filler: &FiniteModule, copies: usize) -> Result<FiniteModule> {
    let mut parts = vec![base];
    parts.extend(std::iter::repeat_n(filler, copies));
    FiniteModule::direct_sum(&parts)
}

/// Blockwise direct sum of jet pairs, exactness data included.
pub fn pad_jet(base: &JetPair, filler: &JetPair, copies: usize) -> Result<JetPair> {
    let mut parts = vec![base];
    parts.extend(std::iter::repeat_n(filler, copies));
    let m1 = FiniteModule::direct_sum(&parts.iter().map(|p| &p.m1).collect::<Vec<_>>())?;
    let m2 = FiniteModule::direct_sum(&parts.iter().map(|p| &p.m2).collect::<Vec<_>>())?;
    let bd = |f: fn(&JetPair) -> &ExactMatrix| ExactMatrix::block_diag(&parts.iter().map(|p| f(p)).collect::<Vec<_>>());
    Ok(JetPair { m1, m2, eps: bd(|p| &p.eps), a: bd(|p| &p.a), b: bd(|p| &p.b) })
}

impl JetPair {
    pub fn rank(&self) -> usize {
        self.m1.dim()
    }

    /// Exactness of 0 → M1 → M2 → M1 → 0, ε = a·b with ε² = 0, and
    /// compatibility of a, b and ε with the coordinate actions.
    pub fn check(&self) -> Result<()> {
        let r = self.rank();
        let fail = |why: &str| Err(Error::DimensionMismatch(format!("jet pair: {why}")));
        if self.m2.dim() != 2 * r {
            return fail("M2 must have twice the dimension of M1");
        }
        if !self.b.mul(&self.a).is_zero() {
            return fail("b∘a ≠ 0");
        }
        if self.a.rank() != r || self.b.rank() != r {
            return fail("a must be injective and b surjective");
        }
        if self.a.mul(&self.b) != self.eps || !self.eps.mul(&self.eps).is_zero() {
            return fail("ε must equal a∘b and square to zero");
        }
        for (x1, x2) in self.m1.actions().iter().zip(self.m2.actions()) {
            if !x2.commutes(&self.eps) {
                return fail("actions must commute with ε");
            }
            if x2.mul(&self.a) != self.a.mul(x1) || self.b.mul(x2) != x1.mul(&self.b) {
                return fail("a and b must be module maps");
            }
        }
        Ok(())
    }

    /// Whether every ε-level action vanishes, i.e. the sequence is the
    /// trivial extension with diagonal actions.
    pub fn is_split_by_actions(&self) -> bool {
        let r = self.rank();
        self.m2.actions().iter().all(|x| (r..2 * r).all(|i| (0..r).all(|j| x.get(i, j).is_zero())))
    }
}
