fn main() {
    std::process::exit(projdiv::cli::main());
}
