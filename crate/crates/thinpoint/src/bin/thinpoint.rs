use std::process::ExitCode;

fn main() -> ExitCode {
    thinpoint::cli::main()
}
