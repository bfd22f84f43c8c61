fn main() {
    let code = warpwatch_cli::run(std::env::args_os());
    std::process::exit(code);
}
