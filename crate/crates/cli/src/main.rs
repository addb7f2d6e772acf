use clap::Parser;

fn main() -> anyhow::Result<()> {
    let cli = phasechi_cli::Cli::parse();
    let manifest = phasechi_cli::run(cli)?;
    for line in phasechi_cli::summarize(&manifest) {
        println!("{line}");
    }
    Ok(())
}
