fn main() {
    std::process::exit(csmri::cli::parse_and_dispatch(std::env::args()));
}
