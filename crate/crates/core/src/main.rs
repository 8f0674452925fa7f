fn main() {
    std::process::exit(symips::cli::run(std::env::args_os()));
}
