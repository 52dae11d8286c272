use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(emovox_cli::run(std::env::args_os()))
}
