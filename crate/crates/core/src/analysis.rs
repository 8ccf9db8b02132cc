//! Request parsing, the end-to-end pipeline and report emission.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::branches::{branch_from_terms, germ_invariants, newton_puiseux, BranchParam, Germ};
use crate::error::{Error, Result};
use crate::exactalg::poly::var_names;
use crate::exactalg::{NumberField, Poly, Rational, Scalar};
use crate::verify::{
    certify, certify_exploratory, colength_oracle, graph_jet_class_vanishes, pushforward_restriction_oracle,
    recheck_witnesses, EmbeddingCertificate, Outcome, SeparationVerdict, Subject, Witness,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MAX_TRUNCATION_ENV: &str = "D0RES_MAX_TRUNCATION";
pub const DEFAULT_MAX_TRUNCATION: usize = 1024;
const BASE_TRUNCATION: usize = 32;
const ORACLE_MAX_RANK: usize = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisRequest {
    pub curve: CurveInput,
    /// Absolute coordinates of the singular point; the origin by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranks: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldInput>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub implicit: Option<ImplicitInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branches: Option<Vec<BranchInput>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImplicitInput {
    /// Terms `[[i, j], "c"]` of Σ c·x^i·y^j.
    pub poly: Vec<(Vec<u32>, String)>,
}

/// Coordinate name (`x`, `y`, `z`, …) to terms `[exponent, "c"]`.
pub type BranchInput = BTreeMap<String, Vec<(usize, String)>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldInput {
    /// Coefficients of the minimal polynomial of `a`, constant term first.
    pub minpoly: Vec<String>,
}

/// Parse and validate a request; errors carry the offending field path.
pub fn parse_request(text: &str) -> Result<AnalysisRequest> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let req: AnalysisRequest = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Parse(format!("{path}: {}", e.into_inner()))
    })?;
    req.validate()?;
    Ok(req)
}

impl AnalysisRequest {
    pub fn validate(&self) -> Result<()> {
        match (&self.curve.implicit, &self.curve.branches) {
            (Some(_), None) => {}
            (None, Some(b)) if !b.is_empty() => {}
            (None, Some(_)) => return Err(Error::Parse("curve.branches: at least one branch is required".into())),
            _ => return Err(Error::Parse("curve: exactly one of `implicit` or `branches` is required".into())),
        }
        if let Some(ranks) = &self.ranks {
            if let Some(i) = ranks.iter().position(|&r| r == 0) {
                return Err(Error::Parse(format!("ranks[{i}]: ranks must be positive")));
            }
        }
        if self.truncation == Some(0) {
            return Err(Error::Parse("truncation: must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub max_truncation: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { max_truncation: DEFAULT_MAX_TRUNCATION }
    }
}

impl AnalyzeOptions {
    /// Reads the truncation ceiling from `D0RES_MAX_TRUNCATION`.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_TRUNCATION_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(n) if n > 0 => Ok(AnalyzeOptions { max_truncation: n }),
                _ => Err(Error::Parse(format!("{MAX_TRUNCATION_ENV}: expected a positive integer, got {v:?}"))),
            },
            Err(_) => Ok(AnalyzeOptions::default()),
        }
    }
}

enum PreparedCurve {
    Implicit(Poly),
    /// Per branch, per coordinate: terms centered at the point.
    Branches(Vec<Vec<Vec<(usize, Scalar)>>>),
}

struct Prepared {
    field: Option<Arc<NumberField>>,
    curve: PreparedCurve,
    point: Vec<Scalar>,
}

fn parse_scalar(s: &str, field: Option<&Arc<NumberField>>, path: &str) -> Result<Scalar> {
    Scalar::parse(s, field).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn prepare(req: &AnalysisRequest) -> Result<Prepared> {
    let field = match &req.field {
        None => None,
        Some(f) => {
            let coeffs = f
                .minpoly
                .iter()
                .enumerate()
                .map(|(i, c)| match parse_scalar(c, None, &format!("field.minpoly[{i}]"))? {
                    Scalar::Rat(q) => Ok(q),
                    Scalar::Alg(..) => unreachable!("parsed without a field"),
                })
                .collect::<Result<Vec<Rational>>>()?;
            Some(NumberField::new(coeffs).map_err(|e| Error::Parse(format!("field.minpoly: {e}")))?)
        }
    };
    let f = field.as_ref();
    let (curve, m) = if let Some(imp) = &req.curve.implicit {
        let mut terms = Vec::with_capacity(imp.poly.len());
        for (i, (e, c)) in imp.poly.iter().enumerate() {
            if e.len() != 2 {
                return Err(Error::Parse(format!("curve.implicit.poly[{i}]: expected an exponent pair [i, j]")));
            }
            terms.push((e.clone(), parse_scalar(c, f, &format!("curve.implicit.poly[{i}]"))?));
        }
        let p = Poly::from_terms(2, terms);
        if p.is_zero() {
            return Err(Error::Parse("curve.implicit.poly: the zero polynomial is not a curve".into()));
        }
        (PreparedCurve::Implicit(p), 2)
    } else {
        let inputs = req.curve.branches.as_ref().expect("validated");
        let m = inputs[0].len();
        let names = var_names(m);
        let mut branches = Vec::with_capacity(inputs.len());
        for (bi, b) in inputs.iter().enumerate() {
            if b.len() != m || names.iter().any(|n| !b.contains_key(n)) {
                return Err(Error::Parse(format!(
                    "curve.branches[{bi}]: coordinates must be exactly {}",
                    names.join(", ")
                )));
            }
            let mut coords = Vec::with_capacity(m);
            for n in &names {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (ti, (e, c)) in b[n].iter().enumerate() {
                    let c = parse_scalar(c, f, &format!("curve.branches[{bi}].{n}[{ti}]"))?;
                    let slot = acc.entry(*e).or_insert_with(Scalar::zero);
                    *slot = &*slot + &c;
                }
                coords.push(acc.into_iter().collect::<Vec<_>>());
            }
            branches.push(coords);
        }
        (PreparedCurve::Branches(branches), m)
    };
    let point = match &req.point {
        None => vec![Scalar::zero(); m],
        Some(p) if p.len() == m => {
            p.iter().enumerate().map(|(i, c)| parse_scalar(c, f, &format!("point[{i}]"))).collect::<Result<Vec<_>>>()?
        }
        Some(p) => return Err(Error::Parse(format!("point: expected {m} coordinates, got {}", p.len()))),
    };
    let curve = match curve {
        PreparedCurve::Branches(bs) => PreparedCurve::Branches(
            bs.into_iter()
                .map(|coords| coords.into_iter().zip(&point).map(|(terms, p)| center(terms, p)).collect())
                .collect(),
        ),
        c => c,
    };
    Ok(Prepared { field, curve, point })
}

/// Subtract the point's coordinate from the constant term.
fn center(terms: Vec<(usize, Scalar)>, p: &Scalar) -> Vec<(usize, Scalar)> {
    let mut acc: BTreeMap<usize, Scalar> = terms.into_iter().collect();
    let slot = acc.entry(0).or_insert_with(Scalar::zero);
    *slot = &*slot - p;
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn branches_at(prep: &Prepared, precision: usize) -> Result<Vec<BranchParam>> {
    match &prep.curve {
        PreparedCurve::Implicit(f) => newton_puiseux(f, &prep.point, precision),
        PreparedCurve::Branches(bs) => bs.iter().map(|terms| branch_from_terms(terms, precision)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub input: AnalysisRequest,
    pub truncation: usize,
    pub germ: GermReport,
    pub certificates: Vec<CertificateReport>,
    pub oracles: OracleReport,
    pub warnings: Vec<String>,
    /// Every requested certificate and every oracle check passed.
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermReport {
    pub field: Option<String>,
    pub point: Vec<String>,
    /// One entry per branch, one series per coordinate.
    pub branches: Vec<Vec<String>>,
    pub n: Vec<u32>,
    pub l_matrix: Vec<Vec<Option<u64>>>,
    pub bii: Option<u64>,
    pub l0: u64,
    pub r0: u64,
    pub singular: bool,
    /// Per branch: whether the graph-skyscraper jet splits.
    pub graph_jet_split: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub rank: u64,
    pub exploratory: bool,
    pub error: Option<String>,
    pub padding: PaddingReport,
    pub points: Vec<VerdictReport>,
    pub tangents: Vec<VerdictReport>,
    pub support_points: Vec<Vec<String>>,
    pub support_preserved: bool,
    pub witnesses_valid: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaddingReport {
    pub base_rank: u64,
    pub copies: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub branches: Vec<usize>,
    pub outcome: String,
    pub witness: Option<String>,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub pushforward_restriction: Vec<PushforwardCheck>,
    pub colength: Vec<ColengthReport>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PushforwardCheck {
    pub branch: usize,
    pub rank: usize,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColengthReport {
    pub branches: [usize; 2],
    pub l: u64,
    pub colength: u64,
    pub agrees: bool,
}

fn verdict_report(v: &SeparationVerdict, names: &[String]) -> VerdictReport {
    let branches = match v.subject {
        Subject::Branch(i) => vec![i],
        Subject::Pair(i, j) => vec![i, j],
    };
    let (witness, reason) = match &v.outcome {
        Outcome::Separated(Witness::Polynomial { poly, kills, spares }) => {
            (Some(format!("{poly} kills the fiber of branch {kills}, not that of branch {spares}")), None)
        }
        Outcome::Separated(Witness::MatrixPower { coordinate, exponent, .. }) => {
            (Some(format!("{}^{exponent} vanishes on M1, not on M2", names[*coordinate])), None)
        }
        Outcome::NotSeparated(why) | Outcome::Inconclusive(why) => (None, Some(why.clone())),
    };
    VerdictReport { branches, outcome: v.outcome.label().to_string(), witness, reason }
}

fn certificate_report(
    germ: &Germ,
    cert: &EmbeddingCertificate,
    error: Option<String>,
    names: &[String],
) -> Result<CertificateReport> {
    Ok(CertificateReport {
        rank: cert.rank,
        exploratory: cert.exploratory,
        error,
        padding: PaddingReport { base_rank: cert.padding.base_rank, copies: cert.padding.copies },
        points: cert.points.iter().map(|v| verdict_report(v, names)).collect(),
        tangents: cert.tangents.iter().map(|v| verdict_report(v, names)).collect(),
        support_points: cert.support_points.iter().map(|p| p.iter().map(|c| c.to_string()).collect()).collect(),
        support_preserved: cert.support_preserved,
        witnesses_valid: recheck_witnesses(germ, cert)?,
        pass: cert.pass,
    })
}

fn germ_report(germ: &Germ, field: Option<&Arc<NumberField>>) -> GermReport {
    GermReport {
        field: field.map(|k| k.to_string()),
        point: germ.point.iter().map(|c| c.to_string()).collect(),
        branches: germ.branches.iter().map(|b| b.coords().iter().map(|s| s.to_string()).collect()).collect(),
        n: germ.n.clone(),
        l_matrix: germ.l_matrix.clone(),
        bii: germ.bii,
        l0: germ.l0,
        r0: germ.r0,
        singular: germ.is_singular(),
        graph_jet_split: germ.branches.iter().map(graph_jet_class_vanishes).collect(),
    }
}

/// Both oracles: fiber modules built in either order for r ≤ 4, and every
/// l_ij recomputed as a colength.
pub fn oracle_report(germ: &Germ) -> Result<OracleReport> {
    let mut pushforward_restriction = Vec::new();
    for (i, b) in germ.branches.iter().enumerate() {
        for r in 1..=ORACLE_MAX_RANK {
            pushforward_restriction.push(PushforwardCheck {
                branch: i,
                rank: r,
                agrees: pushforward_restriction_oracle(b, r)?,
            });
        }
    }
    let colength = colength_oracle(germ)?
        .into_iter()
        .map(|c| ColengthReport {
            branches: [c.pair.0, c.pair.1],
            l: c.l_matrix,
            colength: c.colength,
            agrees: c.agrees(),
        })
        .collect::<Vec<_>>();
    let pass = pushforward_restriction.iter().all(|c| c.agrees) && colength.iter().all(|c| c.agrees);
    Ok(OracleReport { pushforward_restriction, colength, pass })
}

fn warnings_for(germ: &Germ, ranks: &[u64]) -> Vec<String> {
    let mut out = Vec::new();
    if !germ.is_singular() {
        out.push("the point is a smooth point of the curve: r0 = 1 and there is nothing to resolve".to_string());
    } else if germ.n.iter().all(|&n| n == 1) {
        out.push(format!(
            "singular point with {} smooth branches: every branch has n = 1 although the point is singular, \
             and the graph-skyscraper jet class does not vanish",
            germ.branches.len()
        ));
    }
    for &r in ranks {
        if r < germ.r0 {
            out.push(format!("rank {r} is below r0 = {}; its certificate is exploratory", germ.r0));
        }
    }
    out
}

fn retryable(e: &Error) -> bool {
    matches!(e, Error::RaiseTruncation(_) | Error::NoStabilization(_))
}

struct Computed {
    truncation: usize,
    germ: Germ,
    notes: Vec<String>,
}

/// Branches and invariants, raising the truncation on demand. `needed`
/// gives the truncation a germ requires; it is only applied when the
/// request did not fix one.
fn compute_germ(
    req: &AnalysisRequest,
    prep: &Prepared,
    opts: &AnalyzeOptions,
    needed: impl Fn(&Germ) -> usize,
    check: impl Fn(&Germ) -> Result<()>,
) -> Result<Computed> {
    let cap = opts.max_truncation.max(req.truncation.unwrap_or(0));
    let mut n = req.truncation.unwrap_or(BASE_TRUNCATION);
    let mut notes = Vec::new();
    loop {
        let attempt = branches_at(prep, n).and_then(|bs| germ_invariants(bs, prep.point.clone()));
        let attempt = attempt.and_then(|g| {
            let want = needed(&g);
            if req.truncation.is_none() && want > n {
                return Ok(Err(want));
            }
            check(&g).map(|_| Ok(g))
        });
        match attempt {
            Ok(Ok(germ)) => return Ok(Computed { truncation: n, germ, notes }),
            Ok(Err(want)) => n = want,
            Err(e) if retryable(&e) && n < cap => {
                let next = (2 * n).min(cap);
                notes.push(format!("truncation raised from {n} to {next}: {e}"));
                n = next;
            }
            Err(e) => return Err(e),
        }
    }
}

fn default_ranks(germ: &Germ) -> Vec<u64> {
    vec![germ.r0, germ.r0 + 1, germ.r0 + 2]
}

/// Full pipeline: branches and invariants, a certificate per requested
/// rank, both oracles, and warnings.
pub fn run_analyze(req: &AnalysisRequest, opts: &AnalyzeOptions) -> Result<Report> {
    req.validate()?;
    let prep = prepare(req)?;
    let ranks_for = |g: &Germ| req.ranks.clone().unwrap_or_else(|| default_ranks(g));
    let needed = |g: &Germ| {
        let r_max = ranks_for(g).into_iter().max().unwrap_or(1) as usize;
        let n_max = g.n.iter().copied().max().unwrap_or(1) as usize;
        BASE_TRUNCATION.max(8 * r_max * n_max)
    };
    let names = var_names(prep.point.len());
    let build = |g: &Germ| -> Result<(Vec<CertificateReport>, OracleReport)> {
        let mut certs = Vec::new();
        for r in ranks_for(g) {
            let report = match certify(g, r) {
                Ok(c) => certificate_report(g, &c, None, &names)?,
                Err(e @ Error::RankBelowCritical { .. }) => {
                    certificate_report(g, &certify_exploratory(g, r)?, Some(e.to_string()), &names)?
                }
                Err(e) => return Err(e),
            };
            certs.push(report);
        }
        Ok((certs, oracle_report(g)?))
    };
    // certificates and oracles are computed inside the retry loop so that a
    // truncation shortfall there also raises the truncation
    let cell = std::cell::RefCell::new(None);
    let computed = compute_germ(req, &prep, opts, needed, |g| {
        *cell.borrow_mut() = Some(build(g)?);
        Ok(())
    })?;
    let (certificates, oracles) = cell.into_inner().expect("set on success");
    let germ = &computed.germ;
    let mut warnings = computed.notes;
    warnings.extend(warnings_for(germ, &ranks_for(germ)));
    let pass = certificates.iter().all(|c| c.pass && c.witnesses_valid) && oracles.pass;
    Ok(Report {
        version: VERSION.to_string(),
        input: req.clone(),
        truncation: computed.truncation,
        germ: germ_report(germ, prep.field.as_ref()),
        certificates,
        oracles,
        warnings,
        pass,
    })
}

/// Only the germ and the two oracles, as run by the `oracle` subcommand.
pub fn run_oracles(req: &AnalysisRequest, opts: &AnalyzeOptions) -> Result<(GermReport, OracleReport)> {
    req.validate()?;
    let prep = prepare(req)?;
    let cell = std::cell::RefCell::new(None);
    let computed = compute_germ(
        req,
        &prep,
        opts,
        |_| BASE_TRUNCATION,
        |g| {
            *cell.borrow_mut() = Some(oracle_report(g)?);
            Ok(())
        },
    )?;
    Ok((germ_report(&computed.germ, prep.field.as_ref()), cell.into_inner().expect("set on success")))
}

/// lcm of the per-germ r0 over a collection of germs on one curve.
pub fn global_r0<'a>(germs: impl IntoIterator<Item = &'a GermReport>) -> u64 {
    germs.into_iter().fold(1u64, |acc, g| acc.lcm(&g.r0))
}

pub fn parse_report(text: &str) -> Result<Report> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Parse(format!("{path}: {}", e.into_inner()))
    })
}

pub fn emit_report(rep: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(rep).expect("reports serialize");
            s.push('\n');
            s
        }
        OutputFormat::Text => render_text(rep),
    }
}

fn render_text(rep: &Report) -> String {
    let g = &rep.germ;
    let mut s = String::new();
    let _ = writeln!(s, "d0res {}", rep.version);
    let _ = writeln!(s, "point: ({})", g.point.join(", "));
    let _ = writeln!(s, "field: {}", g.field.as_deref().unwrap_or("Q"));
    let _ = writeln!(s, "truncation: {}", rep.truncation);
    let _ = writeln!(s, "branches:");
    for (i, b) in g.branches.iter().enumerate() {
        let _ = writeln!(s, "  [{i}] n = {}  ({})", g.n[i], b.join(", "));
    }
    let _ = writeln!(s, "germ:");
    let bii = g.bii.map_or("-".to_string(), |b| b.to_string());
    let _ = writeln!(s, "  bii = {bii}");
    let _ = writeln!(s, "  l0 = {}", g.l0);
    let _ = writeln!(s, "  r0 = {}", g.r0);
    let _ = writeln!(s, "  singular = {}", g.singular);
    if g.branches.len() > 1 {
        let _ = writeln!(s, "l matrix:");
        let cell = |v: &Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
        let header: Vec<String> = (0..g.branches.len()).map(|j| format!("{j:>4}")).collect();
        let _ = writeln!(s, "      {}", header.join(""));
        for (i, row) in g.l_matrix.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| format!("{:>4}", cell(v))).collect();
            let _ = writeln!(s, "  {i:>4}{}", cells.join(""));
        }
    }
    let _ = writeln!(s, "certificates:");
    for c in &rep.certificates {
        let status = if c.pass { "PASS" } else { "FAIL" };
        let tag = if c.exploratory { " (exploratory)" } else { "" };
        let _ = writeln!(
            s,
            "  rank {}: {status}{tag}  padding {} + {} skyscraper(s)",
            c.rank, c.padding.base_rank, c.padding.copies
        );
        if let Some(e) = &c.error {
            let _ = writeln!(s, "    error: {e}");
        }
        for (kind, list) in [("points", &c.points), ("tangents", &c.tangents)] {
            for v in list.iter() {
                let subject = v.branches.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",");
                let detail = v.witness.as_ref().or(v.reason.as_ref()).map_or(String::new(), |d| format!("  {d}"));
                let _ = writeln!(s, "    {kind:<8} [{subject}] {}{detail}", v.outcome);
            }
        }
    }
    let o = &rep.oracles;
    let agree = |xs: &[bool]| format!("{}/{}", xs.iter().filter(|&&x| x).count(), xs.len());
    let _ = writeln!(s, "oracles:");
    let pr: Vec<bool> = o.pushforward_restriction.iter().map(|c| c.agrees).collect();
    let cl: Vec<bool> = o.colength.iter().map(|c| c.agrees).collect();
    let _ = writeln!(s, "  pushforward/restriction: {} agree", agree(&pr));
    let _ = writeln!(s, "  colength: {} agree", agree(&cl));
    let _ = writeln!(s, "warnings:");
    if rep.warnings.is_empty() {
        let _ = writeln!(s, "  (none)");
    }
    for w in &rep.warnings {
        let _ = writeln!(s, "  - {w}");
    }
    let _ = writeln!(s, "overall: {}", if rep.pass { "PASS" } else { "FAIL" });
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn analyze(text: &str) -> Report {
        run_analyze(&parse_request(text).unwrap(), &AnalyzeOptions::default()).unwrap()
    }

    #[test]
    fn schema_examples() {
        let cusp = parse_request(r#"{"curve":{"implicit":{"poly":[[[0,2],"1"],[[3,0],"-1"]]}},"ranks":[2]}"#).unwrap();
        assert_eq!(cusp.ranks, Some(vec![2]));
        let param = parse_request(r#"{"curve":{"branches":[{"x":[[2,"1"]],"y":[[3,"1"]]}]}}"#).unwrap();
        assert_eq!(param.curve.branches.as_ref().unwrap().len(), 1);
        assert!(matches!(parse_request(r#"{"curve":{}}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn schema_errors_name_the_field() {
        let e = parse_request(r#"{"curve":{"implicit":{"poly":[[[0,2],1]]}}}"#).unwrap_err();
        assert!(e.to_string().contains("curve.implicit.poly[0]"), "{e}");
        let e = parse_request(r#"{"curve":{"implicit":{"poly":[]}},"ranks":[0]}"#).unwrap_err();
        assert!(e.to_string().contains("ranks[0]"), "{e}");
        let e = parse_request(r#"{"curve":{"implicit":{"poly":[]}},"colour":1}"#).unwrap_err();
        assert!(e.to_string().contains("colour"), "{e}");
    }

    #[test]
    fn cusp_report() {
        let rep = analyze(r#"{"curve":{"implicit":{"poly":[[[0,2],"1"],[[3,0],"-1"]]}},"ranks":[2,3]}"#);
        assert_eq!(rep.germ.r0, 2);
        assert!(rep.certificates.iter().all(|c| c.pass));
        assert!(rep.pass);
        assert!(rep.warnings.is_empty());
        assert!(emit_report(&rep, OutputFormat::Json).contains("\"warnings\": []"));
        assert!(emit_report(&rep, OutputFormat::Text).contains("r0 = 2"));
    }

    #[test]
    fn tacnode_below_r0() {
        let rep = analyze(r#"{"curve":{"implicit":{"poly":[[[0,2],"1"],[[4,0],"-1"]]}},"ranks":[2]}"#);
        assert_eq!(rep.germ.r0, 3);
        let c = &rep.certificates[0];
        assert!(c.exploratory && !c.pass);
        assert!(c.error.as_deref().unwrap().contains("below the critical rank"));
        assert_eq!(c.points[0].outcome, "NotSeparated");
    }

    #[test]
    fn node_default_ranks_and_warning() {
        let rep = analyze(r#"{"curve":{"implicit":{"poly":[[[0,2],"1"],[[2,0],"-1"],[[3,0],"-1"]]}}}"#);
        assert_eq!(rep.germ.r0, 2);
        assert_eq!(rep.certificates.iter().map(|c| c.rank).collect::<Vec<_>>(), vec![2, 3, 4]);
        assert!(rep.pass);
        assert_eq!(rep.warnings.len(), 1);
        assert_eq!(rep.germ.graph_jet_split, vec![false, false]);
    }

    #[test]
    fn json_round_trip() {
        let rep = analyze(r#"{"curve":{"branches":[{"x":[[2,"1"]],"y":[[3,"1"]]}]},"format":"text"}"#);
        let json = emit_report(&rep, OutputFormat::Json);
        let back = parse_report(&json).unwrap();
        assert_eq!(back, rep);
        assert_eq!(emit_report(&back, OutputFormat::Json), json);
    }

    #[test]
    fn explicit_branches_are_absolute() {
        let rep = analyze(
            r#"{"curve":{"branches":[{"x":[[0,"1"],[1,"1"]],"y":[[0,"2"],[2,"1"]]},
                {"x":[[0,"1"],[1,"1"]],"y":[[0,"2"],[2,"-1"]]}]},"point":["1","2"],"ranks":[3]}"#,
        );
        assert_eq!((rep.germ.bii, rep.germ.r0), (Some(2), 3));
        assert_eq!(rep.certificates[0].support_points[0], vec!["1", "2"]);
    }

    #[test]
    fn gaussian_field_input() {
        let rep = analyze(
            r#"{"curve":{"implicit":{"poly":[[[2,0],"1"],[[0,2],"1"]]}},"field":{"minpoly":["1","0","1"]},"ranks":[2]}"#,
        );
        assert_eq!(rep.germ.n, vec![1, 1]);
        assert!(rep.pass);
    }

    #[test]
    fn global_r0_is_lcm() {
        let a = analyze(r#"{"curve":{"implicit":{"poly":[[[0,2],"1"],[[4,0],"-1"]]}},"ranks":[3]}"#);
        let b = analyze(r#"{"curve":{"implicit":{"poly":[[[0,2],"1"],[[3,0],"-1"]]}},"ranks":[2]}"#);
        assert_eq!(global_r0([&a.germ, &b.germ]), 6);
    }
}
