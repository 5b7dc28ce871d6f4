fn main() {
    std::process::exit(heisenberg_cli::main_with_args(std::env::args_os()));
}
