fn main() {
    std::process::exit(opkit_cli::run(std::env::args_os()));
}
