use std::process::ExitCode;

use clap::Parser;
use ordkit_cli::app::{effective_seed, execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env = std::env::var("ORDKIT_SEED").ok();
    let run = match effective_seed(cli.seed, env.as_deref()) {
        Ok(seed) => execute(&cli, seed),
        Err(e) => {
            print!("{}", serde_json::to_string(&e.to_json("seed")).expect("values serialize") + "\n");
            return ExitCode::from(2);
        }
    };
    print!("{}", run.stdout());
    ExitCode::from(run.code as u8)
}
