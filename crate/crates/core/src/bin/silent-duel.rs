fn main() {
    std::process::exit(silent_duel::cli::main_with_args(std::env::args_os()));
}
