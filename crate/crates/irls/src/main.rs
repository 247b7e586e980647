fn main() {
    std::process::exit(irls::cli::run(std::env::args_os()));
}
