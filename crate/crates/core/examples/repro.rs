//! Regenerates the relay data set (trajectories, residual histories and a
//! summary) into a directory given as the first argument.

use std::path::PathBuf;

fn main() {
    let dir = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("lure-eq-repro"));
    match lure_eq::cli::repro::run(&dir) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            println!("files written to {}", dir.display());
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(i32::from(e.exit_code()));
        }
    }
}
