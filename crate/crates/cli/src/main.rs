use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lietop_cli::{apply_env_limit, execute, install_panic_hook, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = apply_env_limit() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    install_panic_hook();
    let out = execute(&cli);
    if out.code == 2 {
        eprint!("{}", out.output);
    } else {
        print!("{}", out.output);
        let _ = std::io::stdout().flush();
    }
    ExitCode::from(out.code as u8)
}
