use std::process::ExitCode;

fn main() -> ExitCode {
    unionlab::cli::main()
}
