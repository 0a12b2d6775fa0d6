use std::process::ExitCode;

fn main() -> ExitCode {
    xnr::cli::run(std::env::args_os())
}
