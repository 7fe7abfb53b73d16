fn main() {
    std::process::exit(gma::cli::main_with_args(std::env::args_os()));
}
