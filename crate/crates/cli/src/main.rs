use clap::Parser;

use attenuo_cli::{execute, exit_code, Cli};

fn main() {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(Some((_, files))) => {
            for f in files {
                println!("{}", f.display());
            }
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(exit_code(&e));
        }
    }
}
