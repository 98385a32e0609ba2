fn main() {
    std::process::exit(luinv_cli::main_with_args(std::env::args_os()));
}
