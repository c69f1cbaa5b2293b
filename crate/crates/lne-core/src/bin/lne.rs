fn main() {
    std::process::exit(lne_core::cli::run(std::env::args_os()));
}
