use std::process::ExitCode;

fn main() -> ExitCode {
    lure_eq::cli::main_with_args(std::env::args_os())
}
