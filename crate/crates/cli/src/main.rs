use clap::Parser;
use montrep::{run, Cli};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let code = match run(&cli, &mut stdout.lock()) {
        Ok(exit) => exit,
        Err(e) => {
            eprintln!("montrep: {e}");
            e.exit()
        }
    };
    ExitCode::from(code as u8)
}
