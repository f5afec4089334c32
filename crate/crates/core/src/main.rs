fn main() { std::process::exit(confreg::cli::main_with_args(std::env::args_os())) }
