fn main() {
    std::process::exit(zerolab::cli_main(std::env::args_os()));
}
