fn main() {
    std::process::exit(qkan::cli::main_with(std::env::args_os()));
}
