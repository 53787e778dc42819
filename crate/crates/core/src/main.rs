fn main() {
    std::process::exit(dvblab::cli::run(std::env::args_os()));
}
