fn main() {
    std::process::exit(cyclic_dyn::cli::run(std::env::args_os()));
}
