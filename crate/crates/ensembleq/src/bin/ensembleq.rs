fn main() {
    std::process::exit(ensembleq::cli::run());
}
