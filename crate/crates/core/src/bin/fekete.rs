fn main() {
    let (code, out) = fekete::cli::run(std::env::args_os());
    print!("{out}");
    std::process::exit(code);
}
