fn main() {
    std::process::exit(orbm::cli::main_with(std::env::args()));
}
