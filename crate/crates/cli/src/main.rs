use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use d0res_core::analysis::{
    emit_report, global_r0, parse_request, run_analyze, run_oracles, AnalysisRequest, AnalyzeOptions, OutputFormat,
    Report,
};
use d0res_core::Error;

const GOLDEN_DIR: &str = "golden";

#[derive(Parser)]
#[command(name = "d0res", version, about = "Exact analysis of curve singularities by punctual module families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one germ and print its report.
    Analyze {
        file: PathBuf,
        /// Rank to certify (repeatable); defaults to r0, r0+1, r0+2.
        #[arg(long = "rank")]
        ranks: Vec<u64>,
        /// Series truncation order.
        #[arg(long)]
        truncation: Option<usize>,
        /// Exit with status 1 unless every certificate and oracle passes.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Analyze every *.json file in a directory and compare with golden reports.
    Corpus {
        dir: PathBuf,
        /// Rewrite the golden reports instead of comparing.
        #[arg(long)]
        update_golden: bool,
    },
    /// Run only the fiber-module and colength oracles.
    Oracle { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Text => OutputFormat::Text,
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnsupportedFieldExtension(_) | Error::NestedExtension(_) => 3,
        Error::Parse(_)
        | Error::InvalidArgument(_)
        | Error::NotOnCurve
        | Error::NotReduced(_)
        | Error::DegenerateBranch(_)
        | Error::DimensionMismatch(_) => 2,
        _ => 1,
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(e))
}

fn load(path: &Path) -> Result<AnalysisRequest, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_request(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn analyze(file: &Path, ranks: Vec<u64>, truncation: Option<usize>, strict: bool, format: Option<Format>) -> ExitCode {
    let mut req = match load(file) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    if !ranks.is_empty() {
        req.ranks = Some(ranks);
    }
    if truncation.is_some() {
        req.truncation = truncation;
    }
    let report = match AnalyzeOptions::from_env().and_then(|opts| run_analyze(&req, &opts)) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let format = format.map(OutputFormat::from).or(req.format).unwrap_or_default();
    print!("{}", emit_report(&report, format));
    if strict && !report.pass {
        eprintln!("error: verification failed");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

fn oracle(file: &Path) -> ExitCode {
    let result = load(file).and_then(|req| run_oracles(&req, &AnalyzeOptions::from_env()?));
    match result {
        Ok((germ, oracles)) => {
            let out = serde_json::json!({ "germ": germ, "oracles": oracles });
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            if oracles.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => fail(&e),
    }
}

fn corpus_entries(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    Ok(out)
}

fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

enum EntryStatus {
    Ok,
    Updated,
    Mismatch,
    MissingGolden,
    Failed,
}

struct EntryResult {
    name: String,
    report: Result<Report, Error>,
    status: EntryStatus,
}

fn corpus(dir: &Path, update_golden: bool) -> ExitCode {
    let entries = match corpus_entries(dir) {
        Ok(e) => e,
        Err(e) => return fail(&Error::Parse(format!("{}: {e}", dir.display()))),
    };
    let opts = match AnalyzeOptions::from_env() {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let golden = dir.join(GOLDEN_DIR);
    if update_golden {
        if let Err(e) = fs::create_dir_all(&golden) {
            return fail(&Error::InvalidArgument(format!("{}: {e}", golden.display())));
        }
    }
    let results: Vec<EntryResult> = entries
        .par_iter()
        .map(|path| {
            let name = path.file_stem().expect("file name").to_string_lossy().into_owned();
            let report = load(path).and_then(|req| run_analyze(&req, &opts));
            let status = match &report {
                Err(_) => EntryStatus::Failed,
                Ok(rep) => {
                    let json = emit_report(rep, OutputFormat::Json);
                    let target = golden.join(format!("{name}.report.json"));
                    if update_golden {
                        match write_atomic(&target, &json) {
                            Ok(()) => EntryStatus::Updated,
                            Err(_) => EntryStatus::Failed,
                        }
                    } else {
                        match fs::read_to_string(&target) {
                            Ok(old) if old == json => EntryStatus::Ok,
                            Ok(_) => EntryStatus::Mismatch,
                            Err(_) => EntryStatus::MissingGolden,
                        }
                    }
                }
            };
            EntryResult { name, report, status }
        })
        .collect();

    let mut ok = true;
    for r in &results {
        match &r.report {
            Err(e) => {
                ok = false;
                println!("{:<20} ERROR    {e}", r.name);
            }
            Ok(rep) => {
                let verdict = if rep.pass { "PASS" } else { "FAIL" };
                let golden = match r.status {
                    EntryStatus::Ok => "golden ok",
                    EntryStatus::Updated => "golden updated",
                    EntryStatus::Mismatch => "golden MISMATCH",
                    EntryStatus::MissingGolden => "golden missing (run with --update-golden)",
                    EntryStatus::Failed => "golden write failed",
                };
                ok &= rep.pass && matches!(r.status, EntryStatus::Ok | EntryStatus::Updated);
                let ranks: Vec<String> = rep.certificates.iter().map(|c| c.rank.to_string()).collect();
                println!("{:<20} {verdict:<8} r0 = {}  ranks [{}]  {golden}", r.name, rep.germ.r0, ranks.join(", "));
            }
        }
    }
    let germs: Vec<_> = results.iter().filter_map(|r| r.report.as_ref().ok()).map(|r| &r.germ).collect();
    if !germs.is_empty() {
        println!("global r0 (lcm over germs) = {}", global_r0(germs));
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { file, ranks, truncation, strict, format } => {
            analyze(&file, ranks, truncation, strict, format)
        }
        Command::Corpus { dir, update_golden } => corpus(&dir, update_golden),
        Command::Oracle { file } => oracle(&file),
    }
}
