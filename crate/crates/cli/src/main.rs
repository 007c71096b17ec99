use std::io;
use std::process::ExitCode;

use clap::Parser;
use decolab_cli::{run_with_env, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap maps usage errors to 2 and --help/--version to 0
            let code = e.exit_code();
            e.print().ok();
            return ExitCode::from(code as u8);
        }
    };
    let code = run_with_env(&cli, &mut io::stdout(), &mut io::stderr());
    ExitCode::from(code as u8)
}
