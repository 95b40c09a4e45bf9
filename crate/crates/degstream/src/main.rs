fn main() {
    std::process::exit(degstream::cli::run(std::env::args_os()));
}
