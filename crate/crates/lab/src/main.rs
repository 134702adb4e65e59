use clap::Parser;
use eckhaus_lab::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
