fn main() {
    std::process::exit(spheregate::cli::run(std::env::args_os()));
}
