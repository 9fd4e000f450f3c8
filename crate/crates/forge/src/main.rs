fn main() {
    std::process::exit(malcev_forge::cli::run(std::env::args_os()));
}
