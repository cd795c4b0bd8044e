use std::process::ExitCode;

use clap::Parser;

use geoprove::env::{ensure_env, init_logging, resolve};
use geoprove::{solve, Args};
use geoprove_core::agents::Session;

fn main() -> ExitCode {
    let args = Args::parse();
    init_logging(args.log);
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(args: &Args) -> anyhow::Result<u8> {
    ensure_env(&args.env)?;
    if let Some(port) = args.serve {
        let resolved = resolve(args)?;
        let rt = tokio::runtime::Runtime::new()?;
        rt.block_on(geoprove::server::serve(Session::new(resolved.state), port))?;
        return Ok(0);
    }
    let outcome = solve(args)?;
    println!("{}: {} after {} rounds", args.problem, outcome.run.status, outcome.run.rounds);
    println!("outputs in {}", outcome.problem_dir.display());
    Ok(outcome.exit_code() as u8)
}
