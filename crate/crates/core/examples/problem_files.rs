//! Running the bundled JSON problem files through the harness, as the CLI does.

use std::path::Path;

use morse_index::harness::{parse_problem, run, RunOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("problems");
    let mut paths: Vec<_> = std::fs::read_dir(&dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.sort();
    for path in paths {
        let problem = parse_problem(&std::fs::read_to_string(&path)?)?;
        let report = run(&problem, RunOptions::default());
        let name = path.file_name().unwrap_or_default().to_string_lossy();
        let errors: Vec<&str> = report.errors.iter().map(|e| e.kind.as_str()).collect();
        println!("{name:<34} {:?} {errors:?}", report.verdict);
    }

    let report = run(
        &parse_problem(&std::fs::read_to_string(dir.join("diag_saddle.json"))?)?,
        RunOptions::default(),
    );
    println!("\n{}", report.to_text());
    Ok(())
}
