fn main() {
    std::process::exit(linkey::cli::run(std::env::args_os()));
}
