use clap::Parser;

fn main() -> std::process::ExitCode {
    dce_cli::run(dce_cli::Cli::parse())
}
