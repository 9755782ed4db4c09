use clap::Parser;
use kpartite::cli;

fn main() {
    let config = cli::RunConfig::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if let Err(e) = cli::run(&config, &mut out) {
        eprintln!("error: {}", e);
        std::process::exit(e.exit_code());
    }
}
