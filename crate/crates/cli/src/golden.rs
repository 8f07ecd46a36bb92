//! Recorded command transcripts for regression comparison.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

pub struct Case {
    pub name: String,
    pub args: Vec<String>,
}

/// Reads `cases.txt` in `dir`: one `name<TAB>args` line per case; `#` starts a comment.
pub fn load_cases(dir: &Path) -> io::Result<Vec<Case>> {
    let text = fs::read_to_string(dir.join("cases.txt"))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l
                .split_once('\t')
                .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, format!("no tab in case line '{l}'")))?;
            Ok(Case { name: name.to_string(), args: args.split_whitespace().map(String::from).collect() })
        })
        .collect()
}

/// Exit code, stdout and stderr of one in-process run, as a single text block.
pub fn transcript(args: &[String], env_tol: Option<&str>) -> String {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("qdeform".to_string()).chain(args.iter().cloned());
    let code = crate::run(argv, env_tol, &mut out, &mut err);
    format!(
        "exit: {code}\n--- stdout\n{}--- stderr\n{}",
        String::from_utf8_lossy(&out),
        String::from_utf8_lossy(&err)
    )
}

pub fn golden_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!("{name}.txt"))
}

/// Compares every case against its recorded transcript; returns the names that differ.
/// With `update`, rewrites the recordings instead.
pub fn check_all(dir: &Path, update: bool) -> io::Result<Vec<String>> {
    let mut mismatched = Vec::new();
    for case in load_cases(dir)? {
        let got = transcript(&case.args, None);
        let path = golden_path(dir, &case.name);
        if update {
            fs::write(&path, &got)?;
            continue;
        }
        let want = fs::read_to_string(&path).unwrap_or_default();
        if got != want {
            mismatched.push(case.name);
        }
    }
    Ok(mismatched)
}
