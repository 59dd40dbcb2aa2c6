fn main() {
    std::process::exit(propgraph::cli::main_with_args(std::env::args_os()));
}
