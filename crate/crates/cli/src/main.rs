fn main() {
    std::process::exit(mfk_cli::run(std::env::args_os()));
}
