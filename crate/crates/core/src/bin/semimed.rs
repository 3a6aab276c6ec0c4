fn main() {
    std::process::exit(semimed::cli::run());
}
