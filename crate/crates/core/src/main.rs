fn main() {
    std::process::exit(vafagg::cli::main());
}
