fn main() {
    std::process::exit(entropy_adjoint::cli::main());
}
