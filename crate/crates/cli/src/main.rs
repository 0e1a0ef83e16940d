fn main() {
    std::process::exit(grplus_cli::run(std::env::args_os()));
}
