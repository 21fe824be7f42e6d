fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(steklov::cli::run_command(&args));
}
