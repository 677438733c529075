fn main() {
    std::process::exit(spinorbit::cli::run(std::env::args_os()));
}
