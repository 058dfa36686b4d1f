fn main() {
    std::process::exit(septenary::cli::main());
}
