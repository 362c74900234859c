use std::process::ExitCode;

fn main() -> ExitCode {
    let out = trop_cli::run(std::env::args_os());
    if out.status == 0 {
        print!("{}", out.output);
    } else {
        eprint!("{}", out.output);
    }
    ExitCode::from(out.status as u8)
}
