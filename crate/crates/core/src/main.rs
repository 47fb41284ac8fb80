use clap::Parser;

fn main() {
    let cli = triloc::cli::Cli::parse();
    std::process::exit(triloc::cli::main_with(&cli));
}
