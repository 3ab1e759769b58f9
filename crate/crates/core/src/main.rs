fn main() {
    std::process::exit(sphere_approx::cli::main_with_args(std::env::args_os()));
}
