use std::process::ExitCode;

use stable_image_core::cli::{run, SEED_ENV};

fn main() -> ExitCode {
    let seed = std::env::var(SEED_ENV).ok();
    let outcome = run(std::env::args_os(), seed.as_deref());
    print!("{}", outcome.output);
    ExitCode::from(outcome.code as u8)
}
