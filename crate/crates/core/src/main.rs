fn main() {
    std::process::exit(cubeseg::cli::main_with_args(std::env::args_os()));
}
