//! Shared helpers for the CLI test suites.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .unwrap()
}

pub fn landuse() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_landuse"));
    cmd.current_dir(repo_root());
    cmd
}

pub struct CmdResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(cmd: &mut Command) -> CmdResult {
    let Output {
        status,
        stdout,
        stderr,
    } = cmd.output().expect("failed to spawn landuse binary");
    CmdResult {
        code: status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&stdout).into_owned(),
        stderr: String::from_utf8_lossy(&stderr).into_owned(),
    }
}

/// Runs the whole bundled pipeline into `out_dir`, panicking on failure.
pub fn run_bundled_pipeline(out_dir: &Path) {
    let result = run(landuse()
        .arg("run")
        .arg("--config")
        .arg("fixtures/landuse.cfg")
        .arg("--out-dir")
        .arg(out_dir)
        .arg("--model")
        .arg(out_dir.join("model.json"))
        .arg("--quiet"));
    assert_eq!(result.code, 0, "run failed: {}", result.stderr);
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()))
}
