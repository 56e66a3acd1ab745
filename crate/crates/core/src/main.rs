fn main() {
    std::process::exit(mfrac::cli::run(std::env::args_os()));
}
