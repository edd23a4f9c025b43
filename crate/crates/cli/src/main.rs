use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = frobx_cli::run_command(std::env::args_os());
    print!("{}", outcome.report);
    ExitCode::from(outcome.code as u8)
}
