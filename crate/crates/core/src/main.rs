fn main() -> std::process::ExitCode {
    srt_core::experiment::cli::main()
}
