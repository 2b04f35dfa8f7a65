fn main() {
    let code = anytime_compare::cli::run(std::env::args_os(), &mut std::io::stderr());
    std::process::exit(code);
}
