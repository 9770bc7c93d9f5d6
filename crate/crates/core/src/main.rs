fn main() {
    std::process::exit(ross_spectra::cli::main_with_args(std::env::args_os()));
}
