fn main() -> std::process::ExitCode {
    evans_selberg::cli::main()
}
