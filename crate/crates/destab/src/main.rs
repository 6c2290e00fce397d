fn main() {
    std::process::exit(destab::cli::main_entry());
}
