use std::io;
use std::process::ExitCode;

use clap::Parser;
use sigma_cat_cli::commands::{Io, EXIT_INPUT};
use sigma_cat_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let code = run(&cli, &mut Io { out: &mut out, err: &mut err });
    ExitCode::from(code as u8)
}
