use clap::Parser;

use secrecy_sg::cli::{run, Cli};

fn main() {
    // clap itself exits with code 2 on usage errors.
    let cli = Cli::parse();
    std::process::exit(run(cli));
}
