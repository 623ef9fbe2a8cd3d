fn main() {
    std::process::exit(signed_billiards::cli::main());
}
