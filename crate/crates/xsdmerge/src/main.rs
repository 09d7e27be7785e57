fn main() {
    std::process::exit(xsdmerge::cli::run());
}
