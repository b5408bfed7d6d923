fn main() {
    std::process::exit(frameopt::cli::run());
}
