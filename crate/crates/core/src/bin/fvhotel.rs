fn main() {
    std::process::exit(fvhotel::cli::run_cli(std::env::args()));
}
