#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub fn instances_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

pub fn instance(name: &str) -> PathBuf {
    instances_dir().join(name)
}

pub fn instance_files() -> Vec<PathBuf> {
    let mut files: Vec<_> = std::fs::read_dir(instances_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    files
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn fptprop<I, S>(args: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = Command::new(env!("CARGO_BIN_EXE_fptprop"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Drops timing content: the `wall_time_ms` line of text reports and the
/// `wall_time_ms` field of JSON reports, keeping the JSON valid.
pub fn untimed(report: &str) -> String {
    let mut kept: Vec<String> = Vec::new();
    for line in report.lines() {
        let t = line.trim_start();
        if t.starts_with("wall_time_ms:") || t.starts_with("\"wall_time_ms\":") {
            continue;
        }
        if t.starts_with('}') {
            if let Some(prev) = kept.last_mut() {
                if let Some(stripped) = prev.strip_suffix(',') {
                    *prev = stripped.to_string();
                }
            }
        }
        kept.push(line.to_string());
    }
    kept.into_iter().map(|l| l + "\n").collect()
}
