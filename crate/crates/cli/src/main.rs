fn main() {
    std::process::exit(tqps_cli::run());
}
