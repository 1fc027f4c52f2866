fn main() {
    std::process::exit(cayley_girth::cli::main_with_args(std::env::args_os()));
}
