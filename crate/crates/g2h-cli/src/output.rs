use crate::config::RunConfig;
use serde::Serialize;
use serde_json::json;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

pub fn path(cfg: &RunConfig, name: &str) -> io::Result<PathBuf> {
    fs::create_dir_all(&cfg.output_dir)?;
    Ok(cfg.output_dir.join(name))
}

/// Timestamps never enter result files; they go to `<file>.meta.json`.
fn write_sidecar(file: &Path, cfg: &RunConfig) -> io::Result<()> {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut name = file.as_os_str().to_owned();
    name.push(".meta.json");
    let meta = json!({ "config_hash": cfg.hash(), "written_unix": secs, "version": env!("CARGO_PKG_VERSION") });
    fs::write(PathBuf::from(name), serde_json::to_string_pretty(&meta)? + "\n")
}

fn header(cfg: &RunConfig, kind: &str) -> serde_json::Value {
    json!({ "kind": kind, "config_hash": cfg.hash(), "config": cfg })
}

/// Line-oriented JSON writer: a header line with the config, then one record per line.
pub struct Jsonl {
    out: BufWriter<File>,
    path: PathBuf,
}

impl Jsonl {
    pub fn create(cfg: &RunConfig, name: &str, kind: &str) -> io::Result<Jsonl> {
        let path = path(cfg, name)?;
        let mut out = BufWriter::new(File::create(&path)?);
        writeln!(out, "{}", header(cfg, kind))?;
        write_sidecar(&path, cfg)?;
        Ok(Jsonl { out, path })
    }

    /// Reopens an existing file written under the same config for appending.
    /// Returns the writer and the last record, or `None` if the file must be recreated.
    pub fn resume(cfg: &RunConfig, name: &str) -> io::Result<Option<(Jsonl, Option<serde_json::Value>)>> {
        let path = path(cfg, name)?;
        let Ok(f) = File::open(&path) else { return Ok(None) };
        let mut lines = BufReader::new(f).lines();
        let Some(Ok(first)) = lines.next() else { return Ok(None) };
        let hdr: serde_json::Value = match serde_json::from_str(&first) {
            Ok(v) => v,
            Err(_) => return Ok(None),
        };
        if hdr["config_hash"] != cfg.hash() {
            return Ok(None);
        }
        // A torn final line (interrupted write) is dropped by rewriting the valid prefix.
        let mut good = vec![first];
        let mut last = None;
        for l in lines {
            let l = l?;
            match serde_json::from_str::<serde_json::Value>(&l) {
                Ok(v) => {
                    last = Some(v);
                    good.push(l);
                }
                Err(_) => break,
            }
        }
        fs::write(&path, good.join("\n") + "\n")?;
        let out = BufWriter::new(OpenOptions::new().append(true).open(&path)?);
        Ok(Some((Jsonl { out, path }, last)))
    }

    pub fn write<T: Serialize>(&mut self, rec: &T) -> io::Result<()> {
        writeln!(self.out, "{}", serde_json::to_string(rec)?)
    }

    pub fn finish(mut self) -> io::Result<PathBuf> {
        self.out.flush()?;
        Ok(self.path)
    }
}

/// CSV with a leading `# config_hash=…` comment line.
pub fn write_csv(cfg: &RunConfig, name: &str, columns: &[&str], rows: &[Vec<String>]) -> io::Result<PathBuf> {
    let path = path(cfg, name)?;
    let mut out = BufWriter::new(File::create(&path)?);
    writeln!(out, "# config_hash={}", cfg.hash())?;
    writeln!(out, "{}", columns.join(","))?;
    for r in rows {
        writeln!(out, "{}", r.join(","))?;
    }
    out.flush()?;
    write_sidecar(&path, cfg)?;
    Ok(path)
}

/// Pretty JSON object with `config_hash` merged in.
pub fn write_json<T: Serialize>(cfg: &RunConfig, name: &str, body: &T) -> io::Result<PathBuf> {
    let path = path(cfg, name)?;
    let mut v = serde_json::to_value(body)?;
    if let Some(o) = v.as_object_mut() {
        o.insert("config_hash".into(), cfg.hash().into());
    }
    fs::write(&path, serde_json::to_string_pretty(&v)? + "\n")?;
    write_sidecar(&path, cfg)?;
    Ok(path)
}
