fn main() {
    std::process::exit(qda_cli::parse_and_run(std::env::args_os()));
}
