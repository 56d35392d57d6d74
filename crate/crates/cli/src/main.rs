fn main() {
    std::process::exit(kwidth_cli::main_with(std::env::args_os()));
}
