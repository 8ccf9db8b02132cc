//! Brute-force cross-checks: the fiber module obtained by pushing forward
//! first and restricting afterwards, and intersection lengths recomputed as
//! colengths.

use num_traits::{One, Zero};

use crate::branches::{colength, BranchParam, Germ};
use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, Scalar, Series};
use crate::modlab::{fiber_module, FiniteModule};

/// Largest dimension for which a full permutation search is attempted.
const PERMUTATION_SEARCH_LIMIT: usize = 8;

fn binomial(n: u64, k: u64) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Multiplication by t2 on K[t1, t2]/((t2 − t1)^r, t1^K) in the basis
/// t1^a·t2^b (a < K, b < r), indexed a·r + b.
fn t2_on_product(r: usize, k: usize) -> ExactMatrix {
    let dim = r * k;
    let mut m = ExactMatrix::zeros(dim, dim);
    for a in 0..k {
        for b in 0..r {
            let col = a * r + b;
            if b + 1 < r {
                m.set(col + 1, col, Scalar::one());
                continue;
            }
            // t2^r = −Σ_{i<r} C(r,i)·(−t1)^{r−i}·t2^i
            for i in 0..r {
                let a2 = a + r - i;
                if a2 >= k {
                    continue;
                }
                let sign = if (r - i).is_multiple_of(2) { -1 } else { 1 };
                m.set(a2 * r + i, col, Scalar::from_int(sign * binomial(r as u64, i as u64)));
            }
        }
    }
    m
}

fn series_at(s: &Series, t: &ExactMatrix) -> ExactMatrix {
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

/// Fiber module built by restricting the pushed-forward family: coordinate
/// actions x_k(t2) on the product neighborhood, then the quotient by t1.
fn pushforward_then_restrict(b: &BranchParam, r: usize) -> Result<FiniteModule> {
    let k = r + 1;
    if b.precision() < r + k {
        return Err(Error::RaiseTruncation(format!(
            "product-neighborhood oracle at rank {r} needs precision {}, have {}",
            r + k,
            b.precision()
        )));
    }
    let t2 = t2_on_product(r, k);
    let mut actions = Vec::new();
    for s in b.coords() {
        let x = series_at(s, &t2);
        // the image of t1 is spanned by the blocks a ≥ 1
        let mut q = ExactMatrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                q.set(i, j, x.get(i, j).clone());
            }
        }
        actions.push(q);
    }
    FiniteModule::new(r, actions)
}

/// Whether some basis permutation carries one presentation to the other.
pub fn equal_up_to_permutation(a: &FiniteModule, b: &FiniteModule) -> bool {
    if a.dim() != b.dim() || a.ambient_dim() != b.ambient_dim() {
        return false;
    }
    if a == b {
        return true;
    }
    let d = a.dim();
    if d > PERMUTATION_SEARCH_LIMIT {
        return false;
    }
    let mut perm = Vec::with_capacity(d);
    let mut used = vec![false; d];
    search(a, b, &mut perm, &mut used)
}

fn search(a: &FiniteModule, b: &FiniteModule, perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let d = a.dim();
    let i = perm.len();
    if i == d {
        return true;
    }
    for cand in 0..d {
        if used[cand] {
            continue;
        }
        perm.push(cand);
        let consistent = (0..=i).all(|j| {
            a.actions()
                .iter()
                .zip(b.actions())
                .all(|(x, y)| x.get(perm[i], perm[j]) == y.get(i, j) && x.get(perm[j], perm[i]) == y.get(j, i))
        });
        if consistent {
            used[cand] = true;
            if search(a, b, perm, used) {
                return true;
            }
            used[cand] = false;
        }
        perm.pop();
    }
    false
}

/// Restrict-then-push-forward against push-forward-then-restrict at rank r.
pub fn pushforward_restriction_oracle(b: &BranchParam, r: usize) -> Result<bool> {
    let direct = fiber_module(b, r)?;
    let other = pushforward_then_restrict(b, r)?;
    Ok(equal_up_to_permutation(&direct, &other))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColengthCheck {
    pub pair: (usize, usize),
    pub l_matrix: u64,
    pub colength: u64,
}

impl ColengthCheck {
    pub fn agrees(&self) -> bool {
        self.l_matrix == self.colength
    }
}

/// Every off-diagonal l_ij recomputed as dim O/(I_i + I_j).
pub fn colength_oracle(germ: &Germ) -> Result<Vec<ColengthCheck>> {
    let k = germ.branches.len();
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let l = germ.l_matrix[i][j].expect("off-diagonal entries are filled");
            out.push(ColengthCheck {
                pair: (i, j),
                l_matrix: l,
                colength: colength(&germ.branches[i], &germ.branches[j])?,
            });
        }
    }
    Ok(out)
}
