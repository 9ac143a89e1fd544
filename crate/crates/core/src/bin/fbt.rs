fn main() {
    std::process::exit(fbt_core::cli::execute(std::env::args_os()));
}
