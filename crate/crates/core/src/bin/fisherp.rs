fn main() {
    std::process::exit(fisherp::cli::run(std::env::args_os()));
}
