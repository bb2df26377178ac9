fn main() {
    std::process::exit(sofic_gibbs::cli::main());
}
