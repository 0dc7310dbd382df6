fn main() {
    std::process::exit(pauli_duality::cli::main_with(std::env::args()));
}
