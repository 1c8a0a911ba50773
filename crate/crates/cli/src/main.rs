fn main() {
    std::process::exit(telegraph_cli::run(std::env::args_os()));
}
