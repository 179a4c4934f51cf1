fn main() {
    let code = csfkit::cli::run(std::env::args_os());
    std::process::exit(code);
}
