fn main() {
    let (out, code) = limitlab::cli::run(std::env::args_os());
    print!("{out}");
    std::process::exit(code);
}
