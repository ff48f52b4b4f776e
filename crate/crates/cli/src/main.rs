use clap::Parser;
use tarry_cli::{execute, Cli, EXIT_INPUT};

/// Advisory parallelism degree; changes wall time only, never output bytes.
const THREADS_ENV: &str = "TARRY_THREADS";

fn main() {
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .expect("thread pool is configured once at startup");
            }
            _ => {
                eprintln!("error: {THREADS_ENV} must be a positive integer, got {raw:?}");
                std::process::exit(EXIT_INPUT);
            }
        }
    }
    let cli = Cli::parse();
    let outcome = execute(&cli);
    println!("{}", outcome.output);
    std::process::exit(outcome.code);
}
