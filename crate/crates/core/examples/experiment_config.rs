//! Experiments as data: build a config, run it, and read the report.
use bethe_lab::io::to_json_string;
use bethe_lab::runner::{run, Command, ExperimentConfig, IceArgs, YbeArgs};

fn main() -> bethe_lab::Result<()> {
    let mut config = ExperimentConfig::new(Command::VertexYbe(YbeArgs { trials: 20, ..Default::default() }));
    config.seed = 7;
    println!("config: {}", to_json_string(&config)?);
    let out = run(&config)?;
    println!("{}\nexit code {}", out.summary, out.report.exit_code());

    // A config file only needs the fields it changes.
    let text = r#"{"command": {"name": "vertex-ice-entropy", "params": {"lmax": 8}}}"#;
    let config: ExperimentConfig = serde_json::from_str(text)?;
    assert_eq!(config.command, Command::VertexIceEntropy(IceArgs { lmax: 8 }));
    let out = run(&config)?;
    println!("{}", out.summary);
    for (name, table) in &out.tables {
        println!("{name}:\n{table}");
    }
    Ok(())
}
