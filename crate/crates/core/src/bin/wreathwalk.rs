fn main() {
    std::process::exit(wreathwalk::cli::run(std::env::args_os()));
}
