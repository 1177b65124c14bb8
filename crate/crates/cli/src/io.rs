//! Reading inputs and writing reports.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use insdel_core::bukhma::BukhMaCode;
use insdel_core::rational::parse_rational;
use insdel_core::{Rational, Seq};
use serde::Serialize;
use serde_json::Value;

pub fn parse_rat(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn is_seq(v: &Value) -> bool {
    v.get("q").is_some() && v.get("symbols").is_some()
}

/// A sequence stored on its own or under `received`, `output` or `codeword`.
pub fn seq_from_value(v: &Value) -> Result<Seq> {
    if is_seq(v) {
        return Ok(serde_json::from_value(v.clone())?);
    }
    for key in ["received", "output", "codeword"] {
        if let Some(inner) = v.get(key).filter(|x| is_seq(x)) {
            return Ok(serde_json::from_value(inner.clone())?);
        }
    }
    bail!("no sequence found (expected {{\"q\", \"symbols\"}} or a received/output/codeword field)")
}

pub fn load_seq(path: &Path) -> Result<Seq> {
    seq_from_value(&read_json(path)?).with_context(|| format!("in {}", path.display()))
}

/// A code descriptor stored on its own or under `code`.
pub fn load_code(path: &Path) -> Result<BukhMaCode> {
    let v = read_json(path)?;
    let target = if v.get("periods").is_some() {
        v
    } else {
        v.get("code").cloned().ok_or_else(|| anyhow!("{} holds no code descriptor", path.display()))?
    };
    serde_json::from_value(target).with_context(|| format!("in {}", path.display()))
}

pub fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Header plus rows, comma separated.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Runs `f(0..count)` on `workers` threads and returns results in index order.
pub fn run_indexed<T: Send>(workers: usize, count: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Mutex;
    let workers = workers.clamp(1, count.max(1));
    if workers == 1 {
        return (0..count).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..count).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= count {
                    break;
                }
                let value = f(k);
                slots.lock().expect("no poisoned slot")[k] = Some(value);
            });
        }
    });
    slots
        .into_inner()
        .expect("no poisoned slot")
        .into_iter()
        .map(|v| v.expect("every index ran"))
        .collect()
}
