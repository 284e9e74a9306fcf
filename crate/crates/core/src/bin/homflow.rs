fn main() {
    std::process::exit(homflow::cli::run(std::env::args().collect()));
}
