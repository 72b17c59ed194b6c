use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::Context;

use crate::GlobalArgs;

pub const OUT_DIR_ENV: &str = "WL_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "wl-out";

/// `--out`, else `$WL_OUT_DIR`, else `./wl-out`; created if missing.
pub fn out_dir(global: &GlobalArgs) -> anyhow::Result<PathBuf> {
    let dir = global
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

pub fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}
