use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use flatband::lattice::{builtins, parse_graph, QuotientGraph};
use flatband::report::{
    analyze, truncate, truncation_json, truncation_text, verify, BandSeed, ReportJson, VerificationJson,
};
use flatband::Error;

const EXIT_PARSE: u8 = 2;
const EXIT_ENGINE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "flatband", version, about = "Exact flat bands and eigenvalue densities of periodic graphs")]
struct Cli {
    /// Worker threads for per-band and per-radius parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// One of: kagome, square, cycle, comb2.
    #[arg(long)]
    builtin: Option<String>,
    /// Graph description file.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct Common {
    #[command(flatten)]
    source: Source,
    /// Write the JSON report here ("-" for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Free-resolution stage bound (default: dimension + 3).
    #[arg(long)]
    stage_bound: Option<usize>,
    /// Include wall-clock timings in the JSON report.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Flat bands, kernel generators and densities.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Finite-section counts and error envelopes for each flat band.
    Truncate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5)]
        jmax: usize,
        /// Boundary thickness (default: support width of the band's generators).
        #[arg(long)]
        thickness: Option<usize>,
        /// Reuse the flat bands of a stored analysis JSON.
        #[arg(long)]
        analysis: Option<PathBuf>,
    },
    /// Analysis plus truncation, failing on any envelope violation.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5)]
        jmax: usize,
        #[arg(long)]
        thickness: Option<usize>,
        /// Flip one edge offset of the input as a negative control.
        #[arg(long)]
        self_test_corrupt: bool,
    },
}

enum Failure {
    Parse(String),
    Engine(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(p) => Failure::Parse(p.to_string()),
            other => Failure::Engine(other.to_string()),
        }
    }
}

fn load(source: &Source) -> Result<(String, QuotientGraph), Failure> {
    if let Some(name) = &source.builtin {
        let parsed = builtins::load(name).ok_or_else(|| {
            Failure::Parse(format!("unknown builtin `{name}` (available: {})", builtins::NAMES.join(", ")))
        })?;
        return parsed.map(|g| (name.clone(), g)).map_err(|e| Failure::Parse(format!("builtin {name}: {e}")));
    }
    let path = source.file.as_ref().expect("clap enforces a source");
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let g = parse_graph(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    Ok((path.display().to_string(), g))
}

fn write_json(path: &Path, report: &ReportJson) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report).map_err(|e| Failure::Engine(e.to_string()))? + "\n";
    if path.as_os_str() == "-" {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| Failure::Engine(format!("{}: {e}", path.display())))
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Failure::Engine(e.to_string()))?;
    }
    match cli.command {
        Command::Analyze { common } => {
            let (name, g) = load(&common.source)?;
            let report = analyze(&name, &g, common.stage_bound).map_err(|e| stage("analysis", e))?;
            if common.json.as_deref() != Some(Path::new("-")) {
                print!("{}", report.to_text());
            }
            if let Some(p) = &common.json {
                write_json(p, &report.to_json(common.timing))?;
            }
            Ok(true)
        }
        Command::Truncate { common, jmax, thickness, analysis } => {
            let (name, g) = load(&common.source)?;
            let (mut json, seeds) = match &analysis {
                Some(p) => {
                    let text =
                        std::fs::read_to_string(p).map_err(|e| Failure::Parse(format!("{}: {e}", p.display())))?;
                    let stored: ReportJson =
                        serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", p.display())))?;
                    let seeds = stored
                        .flat_bands
                        .iter()
                        .map(|b| b.to_seed())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| Failure::Parse(format!("{}: {e}", p.display())))?;
                    (stored, seeds)
                }
                None => {
                    let report = analyze(&name, &g, common.stage_bound).map_err(|e| stage("analysis", e))?;
                    let seeds: Vec<BandSeed> = report.bands.iter().map(BandSeed::from).collect();
                    (report.to_json(common.timing), seeds)
                }
            };
            let t = truncate(&g, &seeds, jmax, thickness).map_err(|e| stage("truncation", e))?;
            if common.json.as_deref() != Some(Path::new("-")) {
                print!("{}", truncation_text(&t));
            }
            json.truncation = Some(truncation_json(&t));
            if let Some(p) = &common.json {
                write_json(p, &json)?;
            }
            Ok(true)
        }
        Command::Verify { common, jmax, thickness, self_test_corrupt } => {
            let (name, g) = load(&common.source)?;
            let (target, reference) = if self_test_corrupt { (g.corrupted(), Some(&g)) } else { (g.clone(), None) };
            let v = verify(&name, &target, reference, jmax, thickness, common.stage_bound)
                .map_err(|e| stage("verification", e))?;
            let quiet = common.json.as_deref() == Some(Path::new("-"));
            if !quiet {
                print!("{}", v.analysis.to_text());
                print!("{}", truncation_text(&v.truncation));
                for m in &v.violations {
                    println!("VIOLATION {m}");
                }
                println!("{}", if v.passed() { "PASS" } else { "FAIL" });
            }
            if let Some(p) = &common.json {
                let mut json = v.analysis.to_json(common.timing);
                json.truncation = Some(truncation_json(&v.truncation));
                json.verification = Some(VerificationJson { passed: v.passed(), violations: v.violations.clone() });
                write_json(p, &json)?;
            }
            Ok(v.passed())
        }
    }
}

fn stage(name: &str, e: Error) -> Failure {
    match Failure::from(e) {
        Failure::Parse(m) => Failure::Parse(format!("{name}: {m}")),
        Failure::Engine(m) => Failure::Engine(format!("{name}: {m}")),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Engine(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_ENGINE)
        }
    }
}
