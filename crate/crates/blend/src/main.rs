fn main() {
    std::process::exit(conceptblend::cli::main());
}
