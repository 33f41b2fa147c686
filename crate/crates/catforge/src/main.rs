fn main() {
    std::process::exit(catforge::cli_main());
}
