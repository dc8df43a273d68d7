#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qprivacy::qchannel::{ChannelDocument, KrausChannel};
use qprivacy::qstate::{DensityOperator, StateDocument};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qprivacy"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn write_state(dir: &Path, name: &str, rho: &DensityOperator) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(
        &path,
        serde_json::to_string(&StateDocument::from_density(rho)).unwrap(),
    )
    .unwrap();
    path
}

pub fn write_channel(dir: &Path, name: &str, ch: &KrausChannel) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(
        &path,
        serde_json::to_string(&ChannelDocument::from_channel(ch)).unwrap(),
    )
    .unwrap();
    path
}

/// `(d, F, p)` rows of a `fano-curve` CSV.
pub fn parse_csv(text: &str) -> Vec<(usize, f64, f64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("d,F,p"));
    lines
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            assert_eq!(c.len(), 3, "row {l:?}");
            (
                c[0].parse().unwrap(),
                c[1].parse().unwrap(),
                c[2].parse().unwrap(),
            )
        })
        .collect()
}

/// Grid argmax of `p` per dimension, in order of first appearance.
pub fn argmax_by_dim(rows: &[(usize, f64, f64)]) -> Vec<(usize, f64)> {
    let mut best: Vec<(usize, f64, f64)> = Vec::new();
    for &(d, f, p) in rows {
        match best.iter_mut().find(|b| b.0 == d) {
            Some(b) if p > b.2 => *b = (d, f, p),
            Some(_) => {}
            None => best.push((d, f, p)),
        }
    }
    best.into_iter().map(|(d, f, _)| (d, f)).collect()
}
