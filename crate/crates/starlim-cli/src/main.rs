use clap::Parser;

fn main() {
    let cli = starlim_cli::Cli::parse();
    std::process::exit(starlim_cli::run(cli));
}
