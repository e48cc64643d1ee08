use std::process::ExitCode;

use spg_harness::cli::{execute, parse, ParseFailure};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match parse(std::env::args_os()) {
        Ok(c) => c,
        Err(ParseFailure::Clap(e)) => e.exit(),
        Err(ParseFailure::Config(e)) => return fail("config", &e),
    };
    match execute(cli) {
        Ok(line) => {
            println!("{line}");
            ExitCode::SUCCESS
        }
        Err(e) => fail("run", &e),
    }
}

fn fail(stage: &str, e: &anyhow::Error) -> ExitCode {
    let chain: Vec<String> = e.chain().map(|c| c.to_string()).collect();
    eprintln!("{}", serde_json::json!({"error": e.to_string(), "stage": stage, "causes": chain}));
    ExitCode::from(1)
}
