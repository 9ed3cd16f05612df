fn main() {
    std::process::exit(pcombine::cli::run(std::env::args_os()));
}
