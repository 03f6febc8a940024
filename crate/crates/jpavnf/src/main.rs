fn main() {
    std::process::exit(jpavnf::cli::run(std::env::args_os()));
}
