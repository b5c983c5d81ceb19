fn main() {
    std::process::exit(susy_fp::cli::run(std::env::args_os()));
}
