use std::process::ExitCode;

fn main() -> ExitCode {
    mamseg::cli::main()
}
