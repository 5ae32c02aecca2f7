fn main() {
    std::process::exit(optschwarz::cli::main_from(std::env::args_os(), std::env::vars()));
}
