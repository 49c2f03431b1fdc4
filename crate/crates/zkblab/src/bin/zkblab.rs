//! `zkblab` command-line entry point.

fn main() {
    std::process::exit(zkblab::cli::main());
}
