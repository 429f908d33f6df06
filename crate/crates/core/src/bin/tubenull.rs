fn main() {
    std::process::exit(tubenull::cli::run(std::env::args_os()));
}
