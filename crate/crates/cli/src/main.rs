fn main() {
    std::process::exit(tablealg_cli::run_command(std::env::args_os()));
}
