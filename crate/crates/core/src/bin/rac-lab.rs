fn main() {
    std::process::exit(rac_lab::cli::main_with_args(std::env::args_os()));
}
