fn main() {
    std::process::exit(tartan::cli::run(std::env::args_os()));
}
