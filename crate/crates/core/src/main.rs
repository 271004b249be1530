fn main() {
    std::process::exit(inertial_base::cli::main_with_args(std::env::args_os()));
}
