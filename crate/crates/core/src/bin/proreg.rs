use clap::Parser;

fn main() {
    std::process::exit(proreg::cli::main_with(proreg::cli::Args::parse()));
}
