fn main() {
    std::process::exit(ergosum::cli::main_with_args(std::env::args_os().collect()));
}
