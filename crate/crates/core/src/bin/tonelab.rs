fn main() {
    std::process::exit(tonelab::cli::run(std::env::args_os()));
}
