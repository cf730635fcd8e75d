fn main() {
    std::process::exit(pathquery::cli::main());
}
