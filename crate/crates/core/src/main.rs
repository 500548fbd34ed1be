fn main() {
    std::process::exit(fwcut::cli::main());
}
