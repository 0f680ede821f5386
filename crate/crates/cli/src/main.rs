use std::io;
use std::process::ExitCode;

use clap::Parser;
use reqont::cli::Command;
use reqont::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if matches!(cli.command, Command::Serve(_)) {
        tracing_subscriber::fmt().with_writer(io::stderr).init();
    }
    let code = reqont::run(cli, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code)
}
