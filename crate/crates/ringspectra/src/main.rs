fn main() -> std::process::ExitCode {
    ringspectra::cli::run(std::env::args_os())
}
