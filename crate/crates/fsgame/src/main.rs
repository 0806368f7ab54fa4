fn main() {
    std::process::exit(fsgame::cli::run(std::env::args_os()));
}
