use std::process::ExitCode;

use clap::Parser;

use selfsim_cli::{analyze, corpus_listing, summary, Cli, Command, BUDGET_ENV, REPORT_SCHEMA};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze(args) => match analyze(&args, std::env::var(BUDGET_ENV).ok().as_deref()) {
            Ok(run) => {
                if args.report.is_some() {
                    println!("{}", summary(&run.report));
                } else {
                    print!("{}", run.report.to_json());
                }
                run.exit_code
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Command::Corpus { name } => match corpus_listing(name.as_deref()) {
            Ok(text) => {
                println!("{text}");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Command::Schema => {
            print!("{REPORT_SCHEMA}");
            0
        }
    };
    ExitCode::from(code as u8)
}
