fn main() {
    std::process::exit(expoly_cli::run(std::env::args_os()));
}
