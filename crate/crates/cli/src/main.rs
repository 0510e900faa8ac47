use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = monge_cli::run(std::env::args_os());
    if let Some(diagnostic) = &result.diagnostic {
        eprint!("{diagnostic}");
    }
    let mut out = std::io::stdout().lock();
    // A closed pipe is not worth a panic.
    let _ = out.write_all(result.render().as_bytes()).and_then(|()| out.flush());
    ExitCode::from(result.exit_code as u8)
}
