fn main() {
    std::process::exit(npk::cli::main_with_args(std::env::args_os()));
}
