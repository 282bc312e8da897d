fn main() {
    std::process::exit(lbstab::cli::run(std::env::args_os()));
}
