fn main() {
    std::process::exit(dualgreen::cli::main_with_args(std::env::args_os()));
}
