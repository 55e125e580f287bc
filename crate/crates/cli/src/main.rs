use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use vldl_core::analysis::{bounded_refute, bounded_sat, intersect_empty, SearchBounds, Verdict};
use vldl_core::automata::aja_to_dot;
use vldl_core::difftest::{run_all, DiffConfig};
use vldl_core::project::{aja_decl, alphabet_decl, Project, ProjectFile};
use vldl_core::semantics::evaluate;
use vldl_core::translate::{counter_formula, counter_word, vldl_to_aja};
use vldl_core::Error;

/// Visibly linear dynamic logic toolkit.
#[derive(Parser)]
#[command(name = "vldl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Aja,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a lasso word.
    Eval {
        project: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        word: String,
    },
    /// Translate a formula into a one-way alternating jumping automaton.
    Translate {
        project: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value = "aja")]
        emit: Emit,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a satisfying lasso within bounds.
    Sat {
        project: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 4)]
        max_u: usize,
        #[arg(long, default_value_t = 2)]
        max_v: usize,
    },
    /// Model check a system against a formula (bounded) or a bad-behavior
    /// automaton (exact).
    Mc {
        project: PathBuf,
        #[arg(long)]
        system: String,
        #[arg(long, conflicts_with = "bad", required_unless_present = "bad")]
        formula: Option<String>,
        #[arg(long)]
        bad: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_u: usize,
        #[arg(long, default_value_t = 2)]
        max_v: usize,
    },
    /// Run the randomized differential suites.
    Difftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 12)]
        max_size: usize,
        /// Where to write the minimal failing instance.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Generate example projects.
    Gen {
        #[command(subcommand)]
        what: Gen,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// The n-bit counter formula with its unique model.
    Counter {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<Project, Error> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    Project::from_json(&text)
}

fn write(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict_code(positive: bool) -> ExitCode {
    if positive {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Eval {
            project,
            formula,
            word,
        } => {
            let p = load(&project)?;
            let (f, w) = (p.formula(&formula)?, p.word(&word)?);
            let table = evaluate(f, &p.table, w)?;
            println!("word: {}", w.display(&p.alphabet));
            for (c, v) in table.0.iter().enumerate() {
                println!("class {c}: {v}");
            }
            let holds = table.class(0);
            println!("{}", if holds { "satisfied" } else { "violated" });
            Ok(verdict_code(holds))
        }
        Command::Translate {
            project,
            formula,
            emit,
            out,
        } => {
            let p = load(&project)?;
            let aja = vldl_to_aja(p.formula(&formula)?, &p.table)?;
            let text = match emit {
                Emit::Aja => {
                    let file = ProjectFile {
                        alphabet: alphabet_decl(&p.alphabet),
                        automata: vec![aja_decl(&formula, &aja)],
                        formulas: Vec::new(),
                        words: Vec::new(),
                    };
                    serde_json::to_string_pretty(&file)? + "\n"
                }
                Emit::Dot => aja_to_dot(&formula, &aja),
            };
            write(out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sat {
            project,
            formula,
            max_u,
            max_v,
        } => {
            let p = load(&project)?;
            let verdict = bounded_sat(
                p.formula(&formula)?,
                &p.table,
                &SearchBounds::new(max_u, max_v),
            )?;
            Ok(match verdict {
                Verdict::WitnessFound(w) => {
                    println!("witness: {}", w.display(&p.alphabet));
                    ExitCode::SUCCESS
                }
                _ => {
                    println!("no witness within |u| <= {max_u}, |v| <= {max_v}");
                    ExitCode::from(1)
                }
            })
        }
        Command::Mc {
            project,
            system,
            formula,
            bad,
            max_u,
            max_v,
        } => {
            let p = load(&project)?;
            let s = p.system(&system)?;
            let q0 = s.initial.unwrap_or(0);
            let verdict = match (formula, bad) {
                (Some(f), _) => bounded_refute(
                    &s.vps,
                    q0,
                    p.formula(&f)?,
                    &p.table,
                    &SearchBounds::new(max_u, max_v),
                )?,
                (None, Some(b)) => intersect_empty(&s.vps, q0, p.bvpa(&b)?)?,
                (None, None) => {
                    return Err(Error::Input("either --formula or --bad is required".into()))
                }
            };
            Ok(match verdict {
                Verdict::Counterexample(w) => {
                    println!("counterexample: {}", w.display(&p.alphabet));
                    ExitCode::from(1)
                }
                Verdict::ExhaustedBounds => {
                    println!("holds within |u| <= {max_u}, |v| <= {max_v}");
                    ExitCode::SUCCESS
                }
                _ => {
                    println!("holds");
                    ExitCode::SUCCESS
                }
            })
        }
        Command::Difftest {
            seed,
            count,
            max_size,
            dump,
        } => {
            let reports = run_all(&DiffConfig {
                seed,
                count,
                max_size,
            })?;
            let mut failed = false;
            for r in &reports {
                println!(
                    "{}: {} passed, {} failed",
                    r.name,
                    r.cases - r.failures,
                    r.failures
                );
                if let Some(m) = &r.minimal {
                    failed = true;
                    println!("  minimal failure ({}): {}", r.name, m.detail);
                    let json = m.project.to_json();
                    match &dump {
                        Some(path) => {
                            let path = path.with_extension(format!("{}.json", r.name));
                            write(Some(&path), &json)?;
                            println!("  instance written to {}", path.display());
                        }
                        None => print!("{json}"),
                    }
                }
            }
            Ok(verdict_code(!failed))
        }
        Command::Gen {
            what: Gen::Counter { n, out },
        } => {
            if n == 0 {
                return Err(Error::Input("the counter needs at least one bit".into()));
            }
            let (f, table) = counter_formula(n)?;
            let mut p = Project::new(table.alphabet().clone());
            p.table = table;
            p.formulas.insert("counter".into(), f);
            p.words.insert("witness".into(), counter_word(n));
            write(out.as_deref(), &p.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
