fn main() {
    std::process::exit(spnorm::cli::run_main());
}
