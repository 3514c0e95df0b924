fn main() {
    std::process::exit(resfin::cli::run(std::env::args_os()));
}
