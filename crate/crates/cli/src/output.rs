use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::CliError;

pub const TOOL: &str = "wordstat";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Where results go: stdout when no `--out` stem was given, files otherwise.
pub struct Sink {
    stem: Option<PathBuf>,
}

impl Sink {
    pub fn new(stem: Option<PathBuf>) -> Self {
        Sink { stem }
    }

    pub fn to_files(&self) -> bool {
        self.stem.is_some()
    }

    /// `stem` with the extension replaced.
    pub fn path(&self, ext: &str) -> Option<PathBuf> {
        self.stem.as_ref().map(|s| s.with_extension(ext))
    }

    /// Paths that [`Sink::emit`] will write, for the config echo.
    pub fn planned(&self, exts: &[&str]) -> Vec<String> {
        exts.iter()
            .filter_map(|e| self.path(e))
            .map(|p| p.display().to_string())
            .collect()
    }

    /// Writes the JSON envelope and, when files are requested, the CSV with
    /// a one-line `#` header carrying the same config.
    pub fn emit(
        &self,
        config: &RunConfig,
        result: &impl Serialize,
        csv: Option<Vec<u8>>,
    ) -> Result<(), CliError> {
        let doc = envelope(config, result)?;
        match &self.stem {
            None => {
                let mut out = std::io::stdout().lock();
                serde_json::to_writer_pretty(&mut out, &doc)?;
                writeln!(out)?;
            }
            Some(_) => {
                let mut bytes = serde_json::to_vec_pretty(&doc)?;
                bytes.push(b'\n');
                write_atomic(&self.path("json").unwrap(), &bytes)?;
                if let Some(body) = csv {
                    write_atomic(&self.path("csv").unwrap(), &with_header(config, &body)?)?;
                }
            }
        }
        Ok(())
    }
}

pub fn envelope(config: &RunConfig, result: &impl Serialize) -> Result<Value, CliError> {
    Ok(json!({
        "tool": TOOL,
        "version": VERSION,
        "config": config,
        "result": serde_json::to_value(result)?,
    }))
}

pub fn with_header(config: &RunConfig, body: &[u8]) -> Result<Vec<u8>, CliError> {
    let header = json!({ "tool": TOOL, "version": VERSION, "config": config });
    let mut out = format!("# {}\n", serde_json::to_string(&header)?).into_bytes();
    out.extend_from_slice(body);
    Ok(out)
}

/// Temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| CliError::from(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extensions_replace_the_stem() {
        let s = Sink::new(Some(PathBuf::from("out/run.v1")));
        assert_eq!(s.path("csv").unwrap(), PathBuf::from("out/run.csv"));
        assert_eq!(s.planned(&["json", "csv"]), ["out/run.json", "out/run.csv"]);
        assert!(Sink::new(None).planned(&["json"]).is_empty());
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
