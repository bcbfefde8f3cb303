//! Drives the command-line layer from a `key=value` config and reads back
//! the artifact and its manifest.

use std::fs;

use cgmv::cli::{run_file, strip_timestamp, validate_measure_json};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("cgmv-run-config-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    let out = dir.join("measure.json");
    let cfg = dir.join("spectrum.cfg");
    fs::write(
        &cfg,
        format!("# null-even measure\ncommand=spectrum\nseq=null-even:0.5,0\ngrid=512\nseed=1\noutput={}\n", out.display()),
    )?;
    run_file(&cfg)?;

    let measure: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out)?)?;
    validate_measure_json(&measure)?;
    println!("total {}, atoms {}", measure["total"], measure["atoms"]);
    let manifest = fs::read_to_string(dir.join("measure.json.manifest.json"))?;
    println!("{}", strip_timestamp(&manifest)?);

    fs::write(&cfg, "command=spectrum\nseq=zero\nsmoothing=3\n")?;
    match run_file(&cfg) {
        Err(e) => println!("rejected: {e} (exit code {})", e.exit_code()),
        Ok(()) => println!("unexpectedly accepted"),
    }
    fs::remove_dir_all(&dir)?;
    Ok(())
}
