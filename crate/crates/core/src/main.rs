fn main() {
    std::process::exit(fractal_triple::cli::main_with_args(std::env::args_os()));
}
