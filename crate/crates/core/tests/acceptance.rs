//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p d0res-core --test acceptance`.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use d0res_core::analysis::{emit_report, parse_request, run_analyze, AnalyzeOptions, OutputFormat};
use d0res_core::branches::{germ_invariants, newton_puiseux, BranchParam, Germ};
use d0res_core::exactalg::{Order, Poly, Scalar, Series};
use d0res_core::modlab::{branch_quotient, support_length, t2_on_m1, t2_on_m2};
use d0res_core::verify::{
    certify, colength_oracle, point_module, pushforward_restriction_oracle, recheck_witnesses, separates_points,
    tangent_verdicts, EmbeddingCertificate, Outcome, Subject,
};
use d0res_core::Error;

const RESIDUAL_PRECISION: usize = 40;

struct Expected {
    n: Vec<u32>,
    bii: Option<u64>,
    l0: u64,
    r0: u64,
}

struct CorpusGerm {
    name: &'static str,
    f: Poly,
    germ: Germ,
    expected: Expected,
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn implicit_poly(name: &str) -> Poly {
    let text = std::fs::read_to_string(corpus_dir().join(format!("{name}.json"))).unwrap();
    let req = parse_request(&text).unwrap();
    let terms = req.curve.implicit.unwrap().poly;
    Poly::from_terms(2, terms.into_iter().map(|(e, c)| (e, Scalar::parse(&c, None).unwrap())))
}

/// Hand-derived invariants of the corpus germs.
fn expected() -> Vec<(&'static str, Expected)> {
    let e = |n: &[u32], bii, l0, r0| Expected { n: n.to_vec(), bii, l0, r0 };
    vec![
        ("node", e(&[1, 1], Some(1), 2, 2)),
        ("cusp", e(&[2], None, 1, 2)),
        ("tacnode", e(&[1, 1], Some(2), 3, 3)),
        ("triple_point", e(&[1, 1, 1], Some(1), 2, 2)),
        ("ramphoid_cusp", e(&[2], None, 1, 2)),
        ("e6", e(&[3], None, 1, 3)),
    ]
}

fn origin() -> Vec<Scalar> {
    vec![Scalar::zero(); 2]
}

fn load_corpus() -> Vec<CorpusGerm> {
    expected()
        .into_iter()
        .map(|(name, expected)| {
            let f = implicit_poly(name);
            let branches = newton_puiseux(&f, &origin(), RESIDUAL_PRECISION).unwrap();
            let germ = germ_invariants(branches, origin()).unwrap();
            CorpusGerm { name, f, germ, expected }
        })
        .collect()
}

fn ord(s: &Series) -> usize {
    match s.ord() {
        Order::Finite(k) => k,
        Order::ZeroAtPrecision => usize::MAX,
    }
}

/// Conductor of a branch with a single characteristic exponent, from its
/// parametrization u = λ·t^n, v = Σ c_e t^e: (n − 1)(β − 1) with β the
/// first exponent of v not divisible by n.
fn single_pair_conductor(b: &BranchParam, u: usize) -> u64 {
    let n = b.multiplicity() as usize;
    if n == 1 {
        return 0;
    }
    assert_eq!(b.coord(u).terms().count(), 1, "oracle needs u to be a monomial");
    let v = b.coord(1 - u);
    let beta = v.terms().map(|(e, _)| e).find(|e| e % n != 0).expect("primitive branch");
    assert_eq!(beta.gcd(&n), 1, "oracle needs a single characteristic pair");
    ((n - 1) * (beta - 1)) as u64
}

/// Σ_{j≠i} l_ij recomputed from ord_t ∂f/∂v(γ_i) = c_i + n_i − 1 + Σ_{j≠i} l_ij,
/// where u is a transversal coordinate of branch i and v the other one.
fn derivative_oracle(c: &CorpusGerm) -> Result<(), String> {
    for (i, b) in c.germ.branches.iter().enumerate() {
        let u = b.min_order_coordinate();
        let fv = c.f.partial(1 - u);
        let lhs = ord(&fv.eval_series(b.coords())) as u64;
        let conductor = single_pair_conductor(b, u);
        let sum: u64 = c.germ.l_matrix[i].iter().flatten().sum();
        let rhs = conductor + c.germ.n[i] as u64 - 1 + sum;
        if lhs != rhs {
            return Err(format!("{} branch {i}: ord f_v = {lhs}, expected {rhs}", c.name));
        }
    }
    Ok(())
}

fn labels(cert: &EmbeddingCertificate) -> Vec<(String, &'static str)> {
    cert.points
        .iter()
        .chain(&cert.tangents)
        .map(|v| (format!("{:?}{:?}", v.kind, v.subject), v.outcome.label()))
        .collect()
}

fn check_invariants(corpus: &[CorpusGerm]) -> Result<String, String> {
    for c in corpus {
        let g = &c.germ;
        let mut n = g.n.clone();
        n.sort_unstable();
        let e = &c.expected;
        if (n.as_slice(), g.bii, g.l0, g.r0) != (e.n.as_slice(), e.bii, e.l0, e.r0) {
            return Err(format!(
                "{}: got n={:?} bii={:?} l0={} r0={}, expected n={:?} bii={:?} l0={} r0={}",
                c.name, n, g.bii, g.l0, g.r0, e.n, e.bii, e.l0, e.r0
            ));
        }
        for check in colength_oracle(g).map_err(|e| e.to_string())? {
            if !check.agrees() {
                return Err(format!("{}: colength disagrees at {:?}", c.name, check.pair));
            }
        }
        derivative_oracle(c)?;
    }
    Ok(format!("{} germs, l_ij confirmed by colength and derivative-order oracles", corpus.len()))
}

fn check_certificates(corpus: &[CorpusGerm]) -> Result<String, String> {
    let mut count = 0;
    for c in corpus {
        for r in c.germ.r0..=c.germ.r0 + 2 {
            let cert = certify(&c.germ, r).map_err(|e| format!("{} r={r}: {e}", c.name))?;
            if !cert.pass {
                return Err(format!("{} r={r}: certificate fails: {:?}", c.name, labels(&cert)));
            }
            if !recheck_witnesses(&c.germ, &cert).map_err(|e| e.to_string())? {
                return Err(format!("{} r={r}: a witness does not re-check", c.name));
            }
            count += 1;
        }
    }
    Ok(format!("{count} certificates pass, witnesses re-checked"))
}

fn check_step_a() -> Result<String, String> {
    for r in 2..=8usize {
        let m1 = t2_on_m1(r).nilpotency_index();
        let m2 = t2_on_m2(r).nilpotency_index();
        if m1 != Some(r) || m2 != Some(r + 1) {
            return Err(format!("r={r}: nilpotency indices {m1:?}, {m2:?}"));
        }
    }
    Ok("t2 nilpotent of index r on M1 and r+1 on M2 for r = 2..8".into())
}

fn check_negative_control(corpus: &[CorpusGerm]) -> Result<String, String> {
    let tac = &corpus.iter().find(|c| c.name == "tacnode").unwrap().germ;
    let v = separates_points(tac, 2).map_err(|e| e.to_string())?;
    if !matches!(v[0].outcome, Outcome::NotSeparated(_)) {
        return Err(format!("tacnode r=2: {}", v[0]));
    }
    let (a, b) = (point_module(tac, 0, 2), point_module(tac, 1, 2));
    if a.map_err(|e| e.to_string())? != b.map_err(|e| e.to_string())? {
        return Err("tacnode r=2: presentations differ".into());
    }
    if !matches!(certify(tac, 2), Err(Error::RankBelowCritical { rank: 2, r0: 3 })) {
        return Err("tacnode r=2: certify does not refuse".into());
    }
    // a failure at rank s is always explained by s/n_i ≤ bii
    for c in corpus {
        let g = &c.germ;
        for s in 1..=g.r0 + 2 {
            for v in separates_points(g, s).map_err(|e| e.to_string())? {
                let (Subject::Pair(i, j), Outcome::NotSeparated(_)) = (v.subject, &v.outcome) else { continue };
                let bii = g.bii.unwrap_or(0);
                let n = g.n[i].max(g.n[j]) as u64;
                if s > n * bii {
                    return Err(format!("{} s={s}: pair ({i},{j}) not separated although s/n > bii", c.name));
                }
            }
        }
    }
    Ok("tacnode fibers coincide at r = 2 < r0; every failure has s/n_i <= bii".into())
}

fn check_support_bound(corpus: &[CorpusGerm]) -> Result<String, String> {
    let mut count = 0;
    for c in corpus {
        for (i, b) in c.germ.branches.iter().enumerate() {
            for l in 1..=6usize {
                let m = branch_quotient(b, l).map_err(|e| e.to_string())?;
                let len = support_length(&m).map_err(|e| e.to_string())?;
                if len < l {
                    return Err(format!("{} branch {i} l={l}: support length {len}", c.name));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} quotients checked"))
}

fn check_pushforward_oracle(corpus: &[CorpusGerm]) -> Result<String, String> {
    let mut count = 0;
    for c in corpus {
        for (i, b) in c.germ.branches.iter().enumerate() {
            for r in 1..=4 {
                if !pushforward_restriction_oracle(b, r).map_err(|e| e.to_string())? {
                    return Err(format!("{} branch {i} r={r}: presentations differ", c.name));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} branch/rank pairs agree"))
}

fn check_residuals(corpus: &[CorpusGerm]) -> Result<String, String> {
    for c in corpus {
        for (i, b) in c.germ.branches.iter().enumerate() {
            let res = c.f.eval_series(b.coords());
            if res.precision() < RESIDUAL_PRECISION || !res.is_zero_at_precision() {
                return Err(format!("{} branch {i}: residual {res}", c.name));
            }
        }
        let total: u32 = c.germ.n.iter().sum();
        if Some(total) != c.f.order() {
            return Err(format!("{}: multiplicities sum to {total}, order of f is {:?}", c.name, c.f.order()));
        }
    }
    Ok(format!("f(gamma) = 0 mod t^{RESIDUAL_PRECISION} on every branch"))
}

fn random_unit(rng: &mut ChaCha8Rng, precision: usize) -> Series {
    let mut coeffs = vec![Scalar::from_int(rng.gen_range(1..=3))];
    coeffs.extend((1..precision).map(|_| Scalar::from_int(rng.gen_range(-2..=2))));
    Series::from_coeffs(coeffs)
}

fn check_robustness(corpus: &[CorpusGerm]) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let err = |e: Error| e.to_string();
    for c in corpus {
        let g = &c.germ;
        let base: Vec<_> =
            (g.r0..=g.r0 + 2).map(|r| certify(g, r).map(|x| labels(&x))).collect::<Result<_, _>>().map_err(err)?;
        for trial in 0..10 {
            let branches = g
                .branches
                .iter()
                .map(|b| b.truncate(24).reparametrize(&random_unit(&mut rng, 24)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?;
            let h = germ_invariants(branches, origin()).map_err(err)?;
            if h.l_matrix != g.l_matrix || h.r0 != g.r0 {
                return Err(format!("{} trial {trial}: l matrix changed to {:?}", c.name, h.l_matrix));
            }
            for (k, r) in (g.r0..=g.r0 + 2).enumerate() {
                if certify(&h, r).map(|x| labels(&x)).map_err(err)? != base[k] {
                    return Err(format!("{} trial {trial} r={r}: verdicts changed", c.name));
                }
            }
            let unit_c = Scalar::from_ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4));
            let plain: Vec<_> =
                tangent_verdicts(g, g.r0, None).map_err(err)?.iter().map(|v| v.outcome.label()).collect();
            let bent: Vec<_> =
                tangent_verdicts(g, g.r0, Some(&unit_c)).map_err(err)?.iter().map(|v| v.outcome.label()).collect();
            if plain != bent {
                return Err(format!("{} trial {trial}: tangent test depends on the unit {unit_c}", c.name));
            }
        }
        for r in g.r0 + 1..=g.r0 + 3 {
            if certify(g, r).map(|x| labels(&x)).map_err(err)? != base[0] {
                return Err(format!("{}: verdicts at r={r} differ from r0", c.name));
            }
        }
    }
    let run_all = || -> Result<Vec<String>, String> {
        let mut entries: Vec<_> = std::fs::read_dir(corpus_dir())
            .map_err(|e| e.to_string())?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        entries.sort();
        entries
            .iter()
            .map(|p| {
                let req = parse_request(&std::fs::read_to_string(p).map_err(|e| e.to_string())?).map_err(err)?;
                let rep = run_analyze(&req, &AnalyzeOptions::default()).map_err(err)?;
                Ok(emit_report(&rep, OutputFormat::Json))
            })
            .collect()
    };
    let (first, second) = (run_all()?, run_all()?);
    if first != second {
        return Err("two corpus runs produced different reports".into());
    }
    Ok(format!("10 reparametrizations per germ, padding to r0+3, {} reports byte-identical", first.len()))
}

type Criterion<'a> = (&'static str, Option<Duration>, Box<dyn Fn() -> Result<String, String> + 'a>);

fn main() {
    let start = Instant::now();
    let corpus = load_corpus();
    let load_time = start.elapsed();
    let criteria: Vec<Criterion> = vec![
        ("germ invariants of the corpus", Some(Duration::from_secs(5)), Box::new(|| check_invariants(&corpus))),
        ("certificates at r0, r0+1, r0+2", Some(Duration::from_secs(30)), Box::new(|| check_certificates(&corpus))),
        ("nilpotency of t2 on M1 and M2", None, Box::new(check_step_a)),
        ("tacnode negative control", None, Box::new(|| check_negative_control(&corpus))),
        ("support length of F_l is at least l", None, Box::new(|| check_support_bound(&corpus))),
        ("pushforward/restriction oracle", None, Box::new(|| check_pushforward_oracle(&corpus))),
        ("branch residuals and multiplicity sum", None, Box::new(|| check_residuals(&corpus))),
        ("reparametrization, padding, determinism", None, Box::new(|| check_robustness(&corpus))),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut result = run();
        let mut elapsed = t.elapsed();
        if i == 0 {
            // branch computation is part of the invariant criterion
            elapsed += load_time;
        }
        if let (Ok(_), Some(limit)) = (&result, limit) {
            if elapsed > *limit {
                result = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match result {
            Ok(detail) => println!("[PASS] {:>1}. {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>1}. {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
