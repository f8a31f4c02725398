fn main() {
    std::process::exit(qnet_cli::run_args(std::env::args_os()));
}
