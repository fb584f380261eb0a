fn main() {
    std::process::exit(fairwash::cli::run(std::env::args_os()));
}
