use clap::Parser;
use teleport_core::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    std::process::exit(run(&config));
}
