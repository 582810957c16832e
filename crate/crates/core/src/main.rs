fn main() {
    std::process::exit(gauss_nmr::cli::run(std::env::args_os()));
}
