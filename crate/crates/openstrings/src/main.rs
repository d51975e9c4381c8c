use std::error::Error;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use openstrings::census::{self, CensusConfig};
use openstrings::gauss::GaussDiagram;
use openstrings::invariant::{
    commute_check, compose, phi, phi_poly, ribbon_obstruction_abelian, ribbon_obstruction_full,
};
use openstrings::moves::enumerate_moves;
use openstrings::verify::{self, VerifyConfig};

/// Invariants of open virtual strings from Gauss diagrams.
///
/// Gauss codes are comma-separated `s>t` arrows over positions 1..2m; the
/// empty string is the trivial diagram.
#[derive(Parser)]
#[command(name = "openstrings", version, about)]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the invariant word of a Gauss code
    Phi { code: String },
    /// Print the Laurent polynomial invariant
    Poly { code: String },
    /// Compose the invariants of two codes (left, then right)
    Compose { first: String, second: String },
    /// Report COMMUTE or DISTINCT for the two concatenation orders
    Commute { first: String, second: String },
    /// Run a ribbon obstruction; failing certifies the string is not ribbon
    Ribbon {
        code: String,
        /// Compare the full invariant words instead of the polynomials
        #[arg(long)]
        full: bool,
    },
    /// Reflect the diagram about the vertical axis and reverse every arrow
    Hat { code: String },
    /// Reverse every arrow
    Star { code: String },
    /// List the applicable homotopy moves
    Moves { code: String },
    /// Generate a seeded random diagram
    Random {
        /// Number of arrows
        #[arg(long)]
        arrows: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the randomized property suite; nonzero exit on any falsified law
    Verify {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_arrows: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Enumerate all diagrams up to a size and report invariant statistics
    Census {
        #[arg(long)]
        max_arrows: usize,
        /// Search depth for the delete/slide canonicalization; classes are
        /// upper bounds on homotopy classes
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn Error>> {
    let json = cli.json;
    match cli.command {
        Command::Phi { code } => {
            let diagram: GaussDiagram = code.parse()?;
            let word = phi(&diagram);
            if json {
                println!(
                    "{}",
                    json!({"code": diagram.to_string(), "word": word.to_string()})
                );
            } else {
                println!("{word}");
            }
        }
        Command::Poly { code } => {
            let diagram: GaussDiagram = code.parse()?;
            let poly = phi_poly(&diagram);
            if json {
                println!(
                    "{}",
                    json!({"code": diagram.to_string(), "poly": poly.canonical_string()})
                );
            } else {
                println!("{poly}");
            }
        }
        Command::Compose { first, second } => {
            let left: GaussDiagram = first.parse()?;
            let right: GaussDiagram = second.parse()?;
            let composed = compose(&phi(&left), &phi(&right));
            if json {
                println!(
                    "{}",
                    json!({
                        "first": left.to_string(),
                        "second": right.to_string(),
                        "word": composed.to_string(),
                    })
                );
            } else {
                println!("{composed}");
            }
        }
        Command::Commute { first, second } => {
            let left: GaussDiagram = first.parse()?;
            let right: GaussDiagram = second.parse()?;
            let report = commute_check(&left, &right);
            if json {
                println!(
                    "{}",
                    json!({
                        "commute": report.commute,
                        "forward": report.forward.to_string(),
                        "reverse": report.reverse.to_string(),
                    })
                );
            } else {
                println!("{}", if report.commute { "COMMUTE" } else { "DISTINCT" });
                println!("phi(a.b) = {}", report.forward);
                println!("phi(b.a) = {}", report.reverse);
            }
        }
        Command::Ribbon { code, full } => {
            let diagram: GaussDiagram = code.parse()?;
            let verdict = if full {
                ribbon_obstruction_full(&diagram)
            } else {
                ribbon_obstruction_abelian(&diagram)
            };
            let report = verdict.report();
            if json {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                println!("{verdict}");
                println!("lhs: {}", report.lhs);
                println!("rhs: {}", report.rhs);
                if !verdict.passed() {
                    println!("=> not ribbon");
                }
            }
        }
        Command::Hat { code } => {
            let diagram: GaussDiagram = code.parse()?;
            let result = diagram.hat();
            if json {
                println!("{}", serde_json::to_string(&result.export())?);
            } else {
                println!("{result}");
            }
        }
        Command::Star { code } => {
            let diagram: GaussDiagram = code.parse()?;
            let result = diagram.star();
            if json {
                println!("{}", serde_json::to_string(&result.export())?);
            } else {
                println!("{result}");
            }
        }
        Command::Moves { code } => {
            let diagram: GaussDiagram = code.parse()?;
            let moves = enumerate_moves(&diagram);
            if json {
                let items: Vec<_> = moves
                    .iter()
                    .map(|mv| {
                        json!({
                            "kind": mv.kind(),
                            "action": mv.action(),
                            "display": mv.to_string(),
                            "move": mv,
                        })
                    })
                    .collect();
                println!("{}", serde_json::Value::Array(items));
            } else {
                for mv in &moves {
                    println!("{mv}");
                }
            }
        }
        Command::Random { arrows, seed } => {
            let diagram = GaussDiagram::random(arrows, seed);
            if json {
                println!(
                    "{}",
                    json!({"seed": seed, "export": diagram.export(), "code": diagram.to_string()})
                );
            } else {
                println!("{diagram}");
            }
        }
        Command::Verify {
            count,
            max_arrows,
            seed,
        } => {
            let report = verify::run(VerifyConfig {
                count,
                max_arrows,
                seed,
            });
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                for check in &report.checks {
                    if check.failures.is_empty() {
                        println!("ok   {} ({} cases)", check.name, check.cases);
                    } else {
                        println!(
                            "FAIL {} ({} failures / {} cases)",
                            check.name,
                            check.failures.len(),
                            check.cases
                        );
                        for failure in check.failures.iter().take(5) {
                            println!("     {failure}");
                        }
                    }
                }
                println!(
                    "{} diagrams, {} failures",
                    report.diagrams,
                    report.failure_count()
                );
            }
            if !report.is_ok() {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Census { max_arrows, depth } => {
            let report = census::run(CensusConfig { max_arrows, depth });
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("diagrams: {}", report.diagrams);
                println!("phi classes: {}", report.phi_classes);
                println!(
                    "move classes (depth {}): {}",
                    report.depth, report.move_classes
                );
                println!(
                    "commuting class pairs: {} / {}",
                    report.commuting_pairs, report.class_pairs
                );
                println!("ribbon presentations: {}", report.ribbon_presentations);
                println!(
                    "abelian obstruction failures: {}",
                    report.abelian_obstruction_failures
                );
                println!(
                    "full obstruction failures: {}",
                    report.full_obstruction_failures
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
