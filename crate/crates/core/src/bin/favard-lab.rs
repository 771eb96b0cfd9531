fn main() {
    std::process::exit(favard_lab::cli::run(std::env::args().collect()));
}
