fn main() {
    std::process::exit(banditlab::cli::main());
}
