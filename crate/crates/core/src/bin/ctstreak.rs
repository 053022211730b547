fn main() {
    std::process::exit(ctstreak::cli::run(std::env::args_os()));
}
