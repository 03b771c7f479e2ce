fn main() {
    std::process::exit(pebbling::cli::run(std::env::args()));
}
