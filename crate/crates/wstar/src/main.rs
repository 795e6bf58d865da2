fn main() {
    std::process::exit(wstar::cli::main_entry());
}
