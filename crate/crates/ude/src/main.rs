fn main() {
    std::process::exit(ude::cli::run(std::env::args_os()));
}
