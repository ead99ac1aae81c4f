use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let execution = simrec_cli::run(std::env::args_os());
    let code = execution.exit_code();
    if !execution.diagnostic {
        print!("{}", execution.output);
        let _ = std::io::stdout().flush();
    } else {
        eprint!("{}", execution.output);
    }
    ExitCode::from(code as u8)
}
