use std::process::ExitCode;

fn main() -> ExitCode {
    stardec::cli::run()
}
