use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = toric_cech::cli::run(std::env::args_os());
    println!("{}", outcome.stdout.trim_end());
    ExitCode::from(outcome.code as u8)
}
