fn main() {
    std::process::exit(qball_cli::run(std::env::args_os()));
}
