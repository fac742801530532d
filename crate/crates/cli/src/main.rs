use clap::Parser;
use umeb_cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
