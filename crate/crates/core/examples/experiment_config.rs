//! Driving an experiment from a JSON config, as the `rvlevy` binary does.

use rvlevy::cli::{run, validate, RunOptions};

fn main() -> rvlevy::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/tails.json").to_string());
    let text = std::fs::read_to_string(&path).map_err(|source| rvlevy::Error::Io { path: path.clone(), source })?;
    let cfg = validate(&text)?;
    println!("config hash {}", cfg.hash());

    let out = std::env::temp_dir().join("rvlevy-example");
    let manifest = run(&cfg, &RunOptions { seed: None, out_dir: Some(out.clone()) })?;
    for f in &manifest.files {
        println!("--- {f}");
        print!("{}", std::fs::read_to_string(out.join(f)).expect("output written"));
    }
    Ok(())
}
