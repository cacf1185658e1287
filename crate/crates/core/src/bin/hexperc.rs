use clap::Parser;

fn main() {
    std::process::exit(hexperc::cli::main_with(hexperc::cli::Cli::parse()));
}
