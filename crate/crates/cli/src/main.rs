use clap::Parser;

use volstat_cli::Cli;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = volstat_cli::execute(&cli) {
        eprintln!("volstat: {e}");
        std::process::exit(e.exit_code());
    }
}
