use clap::Parser;
use discodep_cli::{run_with_jobs, Cli, ERROR_EXIT};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("DISCODEP_LOG")).init();
    let cli = Cli::parse();
    let code = match run_with_jobs(&cli) {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ERROR_EXIT
        }
    };
    std::process::exit(code);
}
