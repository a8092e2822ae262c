fn main() {
    std::process::exit(bdg_lab::cli::run());
}
