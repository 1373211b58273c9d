fn main() {
    std::process::exit(minitwistor::cli::run());
}
