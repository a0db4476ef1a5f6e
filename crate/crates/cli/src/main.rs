use std::process::ExitCode;

use clap::Parser;

use etheta_cli::{resolve_config, run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = resolve_config(&cli).and_then(|config| {
        let out = run(&cli, &config)?;
        match &config.output_dir {
            Some(dir) => {
                std::fs::create_dir_all(dir)
                    .map_err(|e| CliError::Compute(format!("cannot create {}: {e}", dir.display())))?;
                let path = dir.join(format!("{}.{}", cli.command.name(), out.ext));
                std::fs::write(&path, &out.text)
                    .map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display())))?;
                eprintln!("wrote {}", path.display());
            }
            None => print!("{}", out.text),
        }
        Ok(out.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
