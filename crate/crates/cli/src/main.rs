fn main() {
    std::process::exit(latticesum_cli::run(std::env::args_os()));
}
