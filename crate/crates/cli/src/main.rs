use clap::Parser;
use ffal_cli::args::{Cli, Command};
use ffal_cli::commands;
use ffal_cli::CliError;

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Active(args) => commands::cmd_active(&args.resolve()?),
        Command::Compress(args) => commands::cmd_compress(&args.resolve()?),
        Command::Demo2d(args) => commands::cmd_demo2d(&args.resolve()?),
        Command::KcenterCheck(args) => commands::cmd_kcenter_check(&args.resolve()?),
    }
}

fn main() {
    // clap itself exits with code 2 on malformed flags, matching the
    // usage-error contract here.
    if let Err(err) = run() {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
