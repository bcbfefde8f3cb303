fn main() {
    std::process::exit(cgmv::cli::main_from_env());
}
