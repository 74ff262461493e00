use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = ulpa_cli::run(std::env::args().skip(1));
    print!("{}", outcome.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.code.clamp(0, 255) as u8)
}
