fn main() {
    std::process::exit(combwalk::cli::run(std::env::args_os()));
}
