mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use imago_core::Limits;

use crate::output::Format;

#[derive(Parser)]
#[command(
    name = "imago",
    version,
    about = "Exact image ratios of word maps on finite groups and polynomial maps on finite rings"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Output format (default: csv for scan, text for verify, json otherwise)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for image computation; 1 selects the sequential path
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Largest group or ring that may be enumerated
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    enumeration_cap: Option<u64>,
    /// Largest number of evaluations per image
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    work_cap: Option<u64>,
    /// Largest group order for which a multiplication table is built
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    table_cap: Option<u64>,
}

impl GlobalArgs {
    fn limits(&self) -> Limits {
        let d = Limits::default();
        Limits {
            enumeration_cap: self.enumeration_cap.unwrap_or(d.enumeration_cap),
            work_cap: self.work_cap.unwrap_or(d.work_cap),
            table_cap: self.table_cap.unwrap_or(d.table_cap),
            workers: self.workers.map(|w| w as usize).unwrap_or(d.workers),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Image ratio of a word on a group, or of a polynomial on a ring
    Eval(commands::EvalArgs),
    /// Approximate a target ratio by a group whose x^M ratio is known exactly
    Plan(commands::PlanArgs),
    /// Check closed forms against brute force
    Verify(commands::VerifyArgs),
    /// Conjugacy class representatives of GL2(q)
    Classes(commands::ClassesArgs),
    /// Ratios for every word on every group
    Scan(commands::ScanArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = cli.global.limits();
    let format = cli.global.format;
    let result = match &cli.command {
        Command::Eval(a) => commands::eval(a, &limits, format.unwrap_or(Format::Json)),
        Command::Plan(a) => commands::plan(a, &limits, format.unwrap_or(Format::Json)),
        Command::Verify(a) => commands::verify(a, &limits, format.unwrap_or(Format::Text)),
        Command::Classes(a) => commands::classes(a, format.unwrap_or(Format::Json)),
        Command::Scan(a) => commands::scan(a, &limits, format.unwrap_or(Format::Csv)),
    };
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            match out.failure {
                Some(e) => {
                    eprintln!("error: {}", e.message);
                    ExitCode::from(e.code)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
