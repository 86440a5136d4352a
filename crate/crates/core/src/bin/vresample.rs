fn main() {
    std::process::exit(vresample::cli::run_cli(std::env::args()));
}
