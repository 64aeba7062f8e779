fn main() {
    std::process::exit(germforge_cli::commands::main_with(std::env::args().collect()));
}
