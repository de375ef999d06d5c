fn main() {
    std::process::exit(linksim::harness::cli_run(std::env::args_os()));
}
