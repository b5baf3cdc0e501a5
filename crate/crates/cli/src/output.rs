//! Output-path resolution and the fixed numeric formatting shared by every
//! emitted file.

use crate::CliError;
use std::path::{Path, PathBuf};

/// Env var naming the directory that relative output paths resolve against.
pub const OUT_DIR_ENV: &str = "COHTHERMO_OUT";

/// 17 significant digits: round-trip safe for f64 and byte-stable across
/// runs.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Resolve an output filename against `COHTHERMO_OUT` (absolute paths are
/// kept as-is), creating the directory when necessary.
pub fn resolve_out_path(name: &Path) -> Result<PathBuf, CliError> {
    if name.is_absolute() {
        if let Some(parent) = name.parent() {
            std::fs::create_dir_all(parent)?;
        }
        return Ok(name.to_path_buf());
    }
    let dir = std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    Ok(dir.join(name))
}

pub fn write_text(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

/// Parse `"x"` or `"start:stop:count"` into a deterministic grid.
pub fn parse_range(spec: &str, name: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = |msg: String| CliError::Usage(format!("--{name} {spec:?}: {msg}"));
    match parts.as_slice() {
        [single] => {
            let v: f64 = single
                .parse()
                .map_err(|_| bad("not a number".into()))?;
            Ok(vec![v])
        }
        [start, stop, count] => {
            let a: f64 = start.parse().map_err(|_| bad("bad start".into()))?;
            let b: f64 = stop.parse().map_err(|_| bad("bad stop".into()))?;
            let n: usize = count.parse().map_err(|_| bad("bad count".into()))?;
            if n == 0 {
                return Err(bad("count must be >= 1".into()));
            }
            if n == 1 {
                return Ok(vec![a]);
            }
            Ok((0..n)
                .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
                .collect())
        }
        _ => Err(bad("expected a number or start:stop:count".into())),
    }
}
