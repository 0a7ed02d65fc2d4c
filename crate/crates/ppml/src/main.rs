fn main() {
    let (code, output) = ppml::cli::run(std::env::args_os());
    print!("{output}");
    std::process::exit(code);
}
