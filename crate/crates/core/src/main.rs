fn main() {
    std::process::exit(waistwidth::cli::main_with_args(std::env::args_os()));
}
