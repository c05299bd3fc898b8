fn main() {
    std::process::exit(cmwide::cli::run(std::env::args()));
}
