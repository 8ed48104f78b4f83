use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;
use gal_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match go(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.downcast_ref::<CliError>().map_or(1, CliError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

fn go(cli: &Cli) -> Result<u8> {
    let out = run(cli)?;
    println!("{}", out.render(cli.opts.json));
    if cli.opts.require_certified && out.certified == Some(false) {
        return Err(CliError::Uncertified("window sequence did not stabilize; raise --rounds or --D".into()).into());
    }
    Ok(if out.failed { 1 } else { 0 })
}
