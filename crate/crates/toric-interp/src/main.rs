fn main() {
    std::process::exit(toric_interp::cli::run());
}
