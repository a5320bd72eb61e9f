fn main() {
    std::process::exit(annulus_sle_cli::run(std::env::args_os()));
}
