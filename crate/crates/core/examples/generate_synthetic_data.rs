//! Writes the synthetic market CSVs to a directory (default `data/`).
//!
//! cargo run --example generate_synthetic_data -- data

use std::path::PathBuf;

use qfinkit::harness::synthetic_files;

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    std::fs::create_dir_all(&dir)?;
    for (name, body) in synthetic_files() {
        let path = dir.join(&name);
        std::fs::write(&path, body)?;
        println!("{}", path.display());
    }
    Ok(())
}
