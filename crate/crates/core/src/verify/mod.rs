//! Separation of points and tangents for the family of fiber modules, and
//! the certificate assembled from them.

mod oracle;

use std::fmt;

use crate::branches::{BranchParam, Germ};
use crate::error::{Error, Result};
use crate::exactalg::{ExactMatrix, Poly, Scalar};
use crate::modlab::{
    annihilates, annihilator, fiber_module, graph_skyscraper, jet_pair, pad, pad_jet, FiniteModule, JetPair,
};

pub use oracle::{colength_oracle, equal_up_to_permutation, pushforward_restriction_oracle, ColengthCheck};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeparationKind {
    Points,
    Tangents,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subject {
    Branch(usize),
    Pair(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `poly` annihilates the fiber of branch `kills` but not that of `spares`.
    Polynomial { poly: Poly, kills: usize, spares: usize },
    /// (action of `coordinate`)^`exponent` is zero on M1 and equals `matrix` ≠ 0 on M2.
    MatrixPower { coordinate: usize, exponent: u64, matrix: ExactMatrix },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Separated(Witness),
    NotSeparated(String),
    Inconclusive(String),
}

impl Outcome {
    pub fn is_separated(&self) -> bool {
        matches!(self, Outcome::Separated(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Separated(_) => "Separated",
            Outcome::NotSeparated(_) => "NotSeparated",
            Outcome::Inconclusive(_) => "Inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationVerdict {
    pub kind: SeparationKind,
    pub subject: Subject,
    pub outcome: Outcome,
}

impl fmt::Display for SeparationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let subject = match self.subject {
            Subject::Branch(i) => format!("branch {i}"),
            Subject::Pair(i, j) => format!("branches {i},{j}"),
        };
        write!(f, "{:?} {subject}: {}", self.kind, self.outcome.label())
    }
}

/// How the rank-r family is assembled from the rank-r0 one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Padding {
    /// Rank of the Ẽ part: r0, or r itself below r0.
    pub base_rank: u64,
    /// Number of graph-skyscraper summands.
    pub copies: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingCertificate {
    pub rank: u64,
    pub r0: u64,
    /// Set when r < r0: verdicts are reported but nothing is guaranteed.
    pub exploratory: bool,
    pub points: Vec<SeparationVerdict>,
    pub tangents: Vec<SeparationVerdict>,
    pub padding: Padding,
    /// Support point of every fiber, in the original coordinates.
    pub support_points: Vec<Vec<Scalar>>,
    pub support_preserved: bool,
    pub pass: bool,
}

fn padding_for(germ: &Germ, r: u64) -> Padding {
    let base_rank = r.min(germ.r0);
    Padding { base_rank, copies: r - base_rank }
}

/// Fiber of branch `i` in the rank-r family: Ẽ part padded by skyscrapers.
pub fn point_module(germ: &Germ, i: usize, r: u64) -> Result<FiniteModule> {
    let p = padding_for(germ, r);
    let base = fiber_module(&germ.branches[i], p.base_rank as usize)?;
    pad(&base, &FiniteModule::skyscraper(germ.ambient_dim()), p.copies as usize)
}

/// Jet pair of branch `i` in the rank-r family.
pub fn tangent_jet(germ: &Germ, i: usize, r: u64) -> Result<JetPair> {
    let p = padding_for(germ, r);
    let b = &germ.branches[i];
    let base = jet_pair(b, p.base_rank as usize)?;
    pad_jet(&base, &graph_skyscraper(b).1, p.copies as usize)
}

fn check_rank(r: u64) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidArgument("rank must be positive".into()));
    }
    Ok(())
}

pub fn separates_points(germ: &Germ, r: u64) -> Result<Vec<SeparationVerdict>> {
    check_rank(r)?;
    let k = germ.branches.len();
    let modules = (0..k).map(|i| point_module(germ, i, r)).collect::<Result<Vec<_>>>()?;
    let anns: Vec<_> = modules.iter().map(|m| annihilator(m, r as u32)).collect();
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let outcome = if anns[i] != anns[j] {
                let w = anns[i]
                    .basis
                    .iter()
                    .find(|f| !annihilates(&modules[j], f))
                    .map(|f| (f, i, j))
                    .or_else(|| anns[j].basis.iter().find(|f| !annihilates(&modules[i], f)).map(|f| (f, j, i)))
                    .expect("distinct annihilators differ in a basis element");
                Outcome::Separated(Witness::Polynomial { poly: w.0.clone(), kills: w.1, spares: w.2 })
            } else if modules[i] == modules[j] {
                Outcome::NotSeparated("identical presentations".into())
            } else {
                Outcome::Inconclusive("equal annihilators, different action matrices".into())
            };
            out.push(SeparationVerdict { kind: SeparationKind::Points, subject: Subject::Pair(i, j), outcome });
        }
    }
    Ok(out)
}

/// Coordinate of least pullback order, ties to the lowest index.
pub fn tangent_coordinate(b: &BranchParam) -> usize {
    b.min_order_coordinate()
}

/// Tangent test at rank r. For r ≥ r0 the exponent is r0/n; below r0 the
/// test is exploratory with exponent ⌈r/n⌉ and can only come out Separated
/// or Inconclusive. `unit` replaces the test function f by f + c·f².
pub fn tangent_verdicts(germ: &Germ, r: u64, unit: Option<&Scalar>) -> Result<Vec<SeparationVerdict>> {
    check_rank(r)?;
    let exploratory = r < germ.r0;
    let mut out = Vec::new();
    for (i, b) in germ.branches.iter().enumerate() {
        let n = germ.n[i] as u64;
        let exponent = if exploratory { r.div_ceil(n) } else { germ.r0 / n };
        let jet = tangent_jet(germ, i, r)?;
        let k = tangent_coordinate(b);
        let perturb = |a: &ExactMatrix| match unit {
            Some(c) => a.add(&a.mul(a).scale(c)),
            None => a.clone(),
        };
        let p1 = perturb(jet.m1.action(k)).pow(exponent);
        let p2 = perturb(jet.m2.action(k)).pow(exponent);
        let outcome = if p1.is_zero() && !p2.is_zero() {
            Outcome::Separated(Witness::MatrixPower { coordinate: k, exponent, matrix: p2 })
        } else {
            let why = if p1.is_zero() {
                "power vanishes on M2 as well".to_string()
            } else {
                "power does not vanish on M1".to_string()
            };
            if exploratory {
                Outcome::Inconclusive(why)
            } else {
                Outcome::NotSeparated(why)
            }
        };
        out.push(SeparationVerdict { kind: SeparationKind::Tangents, subject: Subject::Branch(i), outcome });
    }
    Ok(out)
}

pub fn separates_tangents(germ: &Germ, r: u64) -> Result<Vec<SeparationVerdict>> {
    if r < germ.r0 {
        return Err(Error::RankBelowCritical { rank: r, r0: germ.r0 });
    }
    tangent_verdicts(germ, r, None)
}

/// The graph-skyscraper jet splits iff every coordinate has order ≥ 2.
pub fn graph_jet_class_vanishes(b: &BranchParam) -> bool {
    graph_skyscraper(b).1.is_split_by_actions()
}

/// Full certificate at rank r ≥ r0.
pub fn certify(germ: &Germ, r: u64) -> Result<EmbeddingCertificate> {
    if r < germ.r0 {
        return Err(Error::RankBelowCritical { rank: r, r0: germ.r0 });
    }
    assemble(germ, r)
}

/// Same as `certify` but also runs below r0, flagging the result exploratory.
pub fn certify_exploratory(germ: &Germ, r: u64) -> Result<EmbeddingCertificate> {
    assemble(germ, r)
}

fn assemble(germ: &Germ, r: u64) -> Result<EmbeddingCertificate> {
    check_rank(r)?;
    let padding = padding_for(germ, r);
    let points = separates_points(germ, r)?;
    let tangents = tangent_verdicts(germ, r, None)?;
    let mut support_preserved = true;
    for i in 0..germ.branches.len() {
        tangent_jet(germ, i, r)?.check()?;
        let base = fiber_module(&germ.branches[i], padding.base_rank as usize)?;
        let padded = point_module(germ, i, r)?;
        if annihilator(&base, r as u32) != annihilator(&padded, r as u32) {
            support_preserved = false;
        }
    }
    let pass = support_preserved && points.iter().chain(&tangents).all(|v| v.outcome.is_separated()) && r >= germ.r0;
    Ok(EmbeddingCertificate {
        rank: r,
        r0: germ.r0,
        exploratory: r < germ.r0,
        points,
        tangents,
        padding,
        support_points: vec![germ.point.clone(); germ.branches.len()],
        support_preserved,
        pass,
    })
}

/// Re-evaluate every witness of a certificate against freshly built modules.
pub fn recheck_witnesses(germ: &Germ, cert: &EmbeddingCertificate) -> Result<bool> {
    let r = cert.rank;
    for v in cert.points.iter().chain(&cert.tangents) {
        match &v.outcome {
            Outcome::Separated(Witness::Polynomial { poly, kills, spares }) => {
                let a = point_module(germ, *kills, r)?;
                let b = point_module(germ, *spares, r)?;
                if !annihilates(&a, poly) || annihilates(&b, poly) {
                    return Ok(false);
                }
            }
            Outcome::Separated(Witness::MatrixPower { coordinate, exponent, matrix }) => {
                let Subject::Branch(i) = v.subject else { return Ok(false) };
                let jet = tangent_jet(germ, i, r)?;
                let p1 = jet.m1.action(*coordinate).pow(*exponent);
                let p2 = jet.m2.action(*coordinate).pow(*exponent);
                if !p1.is_zero() || p2 != *matrix || matrix.is_zero() {
                    return Ok(false);
                }
            }
            _ => {}
        }
    }
    Ok(true)
}
