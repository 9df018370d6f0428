use clap::Parser;
use cqopt_cli::{run, Cli};

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let text = run(&cli)?;
    if cli.command.out().is_none() {
        print!("{text}");
    }
    Ok(())
}
