use clap::Parser;

fn main() {
    let cli = dynelect::cli::Cli::parse();
    std::process::exit(dynelect::cli::main_with(cli));
}
