fn main() {
    std::process::exit(pentaform::cli::run(std::env::args()));
}
