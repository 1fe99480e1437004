use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(hyperfactor_cli::run(std::env::args_os()))
}
