fn main() {
    std::process::exit(hciz::cli::run(std::env::args_os().collect()));
}
