use clap::Parser;

fn main() {
    std::process::exit(christol::cli::run(christol::cli::Cli::parse()));
}
