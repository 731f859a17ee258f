use clap::Parser;

fn main() {
    let cli = schurkit::cli::Cli::parse();
    match schurkit::cli::execute(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            std::process::exit(outcome.exit_code);
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            std::process::exit(failure.exit_code);
        }
    }
}
