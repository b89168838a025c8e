fn main() {
    std::process::exit(rvnet::cli::run());
}
