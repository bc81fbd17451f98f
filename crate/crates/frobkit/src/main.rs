fn main() {
    std::process::exit(frobkit::cli::main_entry());
}
