fn main() {
    std::process::exit(floatbody::cli::run(std::env::args_os()));
}
