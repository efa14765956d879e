fn main() {
    std::process::exit(matroidwb::cli::run(std::env::args_os()));
}
