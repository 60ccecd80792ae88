use clap::Parser;

fn main() {
    std::process::exit(ekcells_cli::main_with(ekcells_cli::Cli::parse()));
}
