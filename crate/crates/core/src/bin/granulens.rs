fn main() {
    std::process::exit(granulens::cli::run(std::env::args_os()));
}
