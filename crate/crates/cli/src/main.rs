fn main() {
    std::process::exit(hyperarea_cli::run(std::env::args_os()));
}
