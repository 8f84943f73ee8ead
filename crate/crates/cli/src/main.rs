use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use translab::arrange::{extract_homogeneous, gen_star_coloring, Strategy};
use translab::chainlab::{
    approximation, build_chain, intersection_witnesses, triangle_scan, Chain,
};
use translab::format::{from_text, to_text};
use translab::indep::{brute_translation, recover_translation};
use translab::instances::translation_instance;
use translab::poset::{amalgamate, extend, scan_equal_sums, validate, Condition, LabelPair};
use translab::{Error, Label};

#[derive(Parser)]
#[command(
    name = "translab",
    version,
    about = "Checks the finite combinatorics of the translation poset"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a condition file against the nine clauses.
    Validate { file: PathBuf },
    /// Extend a condition to contain a label and reach given sizes.
    Extend {
        file: PathBuf,
        #[arg(long)]
        label: Label,
        #[arg(long, default_value_t = 0)]
        min_n: usize,
        #[arg(long, default_value_t = 0)]
        min_m: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Amalgamate two aligned conditions.
    Amalgamate {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a chain of conditions and check its stability.
    Chain {
        #[arg(long, value_delimiter = ',', required = true)]
        labels: Vec<Label>,
        #[arg(long, default_value_t = 1)]
        target_n: usize,
        #[arg(long, env = "TRANSLAB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The four certified intersection witnesses of a label pair.
    Witnesses {
        chain: PathBuf,
        #[arg(long)]
        pair: LabelPair,
    },
    /// Equal-sum quadruples of leaves, each with its certificate.
    ScanSums { file: PathBuf },
    /// Look for three realized sums that pairwise have color 0.
    ScanTriangles { file: PathBuf },
    /// Extract 1-homogeneous sets with a 4-arrangement from seeded colorings.
    Lemma2 {
        #[arg(long, default_value_t = 16)]
        ell: usize,
        #[arg(long, default_value = "matching")]
        strategy: Strategy,
        #[arg(long, env = "TRANSLAB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        runs: u64,
        /// Write the full certificates here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare translation recovery with the brute-force oracle.
    Lemma3 {
        #[arg(long, default_value_t = 1000)]
        runs: u64,
        #[arg(long, env = "TRANSLAB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 24)]
        max_n: usize,
    },
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    seed: Option<u64>,
    elapsed_ms: u64,
    passed: u64,
    failed: u64,
    violations: Vec<String>,
    result: Value,
}

/// Anything that is not a finding: unreadable or malformed input, or a
/// precondition the input does not meet.
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type Outcome = Result<Tally, UsageError>;

#[derive(Default)]
struct Tally {
    seed: Option<u64>,
    passed: u64,
    failed: u64,
    violations: Vec<String>,
    result: Value,
}

impl Tally {
    fn record(&mut self, ok: bool, violation: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.violations.push(violation());
        }
    }
}

fn read<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, UsageError> {
    let text =
        fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    from_text(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn write<T: Serialize>(path: &Path, x: &T) -> Result<(), UsageError> {
    fs::write(path, to_text(x)).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn summary(p: &Condition) -> Value {
    json!({ "u": p.u, "n": p.n, "m_star": p.m_star })
}

fn emit_condition(p: &Condition, output: Option<&Path>) -> Result<Value, UsageError> {
    let mut v = summary(p);
    match output {
        Some(path) => {
            write(path, p)?;
            v["output"] = json!(path.display().to_string());
        }
        None => v["condition"] = serde_json::to_value(p).expect("serializable"),
    }
    Ok(v)
}

fn run(cmd: Command) -> Outcome {
    let mut t = Tally::default();
    match cmd {
        Command::Validate { file } => {
            let p: Condition = read(&file)?;
            let vs = validate(&p);
            t.record(vs.is_empty(), String::new);
            t.violations = vs.iter().map(ToString::to_string).collect();
            t.result = json!({ "valid": vs.is_empty(), "clauses": vs });
        }
        Command::Extend {
            file,
            label,
            min_n,
            min_m,
            output,
        } => {
            let p: Condition = read(&file)?;
            let q = extend(&p, label, min_n, min_m)?;
            t.record(true, String::new);
            t.result = emit_condition(&q, output.as_deref())?;
        }
        Command::Amalgamate {
            first,
            second,
            output,
        } => {
            let p: Condition = read(&first)?;
            let q: Condition = read(&second)?;
            let r = amalgamate(&p, &q)?;
            t.record(true, String::new);
            t.result = emit_condition(&r, output.as_deref())?;
        }
        Command::Chain {
            labels,
            target_n,
            seed,
            output,
        } => {
            t.seed = Some(seed);
            let c = build_chain(&labels, target_n, seed)?;
            let stable = approximation(&c);
            t.record(stable.is_ok(), || stable.as_ref().unwrap_err().to_string());
            let mut v = json!({
                "stages": c.len(),
                "last": summary(c.last()),
                "stable": stable.is_ok(),
            });
            match output {
                Some(path) => {
                    write(&path, &c)?;
                    v["output"] = json!(path.display().to_string());
                }
                None => v["chain"] = serde_json::to_value(&c).expect("serializable"),
            }
            t.result = v;
        }
        Command::Witnesses { chain, pair } => {
            let c: Chain = read(&chain)?;
            let g = match approximation(&c) {
                Ok(g) => g,
                Err(e) => {
                    t.record(false, || e.to_string());
                    return Ok(t);
                }
            };
            match intersection_witnesses(&g, pair.lo(), pair.hi()) {
                Ok(ws) => {
                    t.record(true, String::new);
                    t.result = json!({ "pair": pair, "witnesses": ws });
                }
                Err(e @ Error::ClaimViolation(_)) => t.record(false, || e.to_string()),
                Err(e) => return Err(e.into()),
            }
        }
        Command::ScanSums { file } => {
            let p: Condition = read(&file)?;
            let reports = scan_equal_sums(&p)?;
            for r in &reports {
                t.record(!r.is_violation(), || {
                    format!(
                        "CLAIM-VIOLATION: {{{}, {}}} and {{{}, {}}} share the sum {}",
                        r.pairs[0][0], r.pairs[0][1], r.pairs[1][0], r.pairs[1][1], r.sum
                    )
                });
            }
            t.result = json!({ "quadruples": reports });
        }
        Command::ScanTriangles { file } => {
            let p: Condition = read(&file)?;
            let valid = validate(&p).is_empty();
            let found = triangle_scan(&p)?;
            t.record(found.is_none(), || {
                let s = &found.as_ref().expect("a triangle").sums;
                format!(
                    "CLAIM-VIOLATION: sums {}, {}, {} all have color 0",
                    s[0], s[1], s[2]
                )
            });
            t.result = json!({ "valid": valid, "triangle": found });
        }
        Command::Lemma2 {
            ell,
            strategy,
            seed,
            runs,
            output,
        } => {
            t.seed = Some(seed);
            let mut rows = Vec::new();
            let mut certs = Vec::new();
            for i in 0..runs {
                let s = seed.wrapping_add(i);
                let h = gen_star_coloring(ell, strategy, s)?;
                match extract_homogeneous(&h) {
                    Ok(cert) => {
                        let verdict = cert.verify(&h);
                        t.record(verdict.is_ok(), || {
                            format!(
                                "run {i}: certificate does not verify: {}",
                                verdict.as_ref().unwrap_err()
                            )
                        });
                        rows.push(json!({
                            "seed": s,
                            "route": cert.route,
                            "members": cert.members.len(),
                            "arrangement": cert.arrangement,
                            "verified": verdict.is_ok(),
                        }));
                        certs.push(cert);
                    }
                    Err(e @ Error::LemmaViolation(_)) => {
                        t.record(false, || format!("run {i}: {e}"));
                        rows.push(json!({ "seed": s, "error": e.to_string() }));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            if let Some(path) = output {
                write(&path, &certs)?;
            }
            t.result = json!({ "ell": ell, "strategy": strategy, "runs": rows });
        }
        Command::Lemma3 { runs, seed, max_n } => {
            t.seed = Some(seed);
            for i in 0..runs {
                let s = seed.wrapping_add(i);
                let inst = translation_instance(s, max_n);
                let brute = brute_translation(&inst.translated, &inst.basis)?;
                let got = recover_translation(&inst.translated, &inst.basis);
                let ok = brute.len() == 1 && got.as_ref().is_ok_and(|x| brute.contains(x));
                t.record(ok, || {
                    let got = match &got {
                        Ok(x) => x.to_string(),
                        Err(e) => e.to_string(),
                    };
                    let brute: Vec<String> = brute.iter().map(ToString::to_string).collect();
                    format!(
                        "instance {s}: recovered {got}, brute force [{}]",
                        brute.join(", ")
                    )
                });
            }
            t.result = json!({ "runs": runs, "matches": t.passed, "max_n": max_n });
        }
    }
    Ok(t)
}

fn main() -> ExitCode {
    let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli.command) {
        Ok(t) => {
            let report = RunReport {
                command,
                seed: t.seed,
                elapsed_ms: start.elapsed().as_millis() as u64,
                passed: t.passed,
                failed: t.failed,
                violations: t.violations,
                result: t.result,
            };
            print!("{}", to_text(&report));
            if report.failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
