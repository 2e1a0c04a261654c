#![allow(dead_code)]

use std::path::Path;
use std::process::Command;

use electrovac::{rn_data, RNParameters};
use serde_json::Value;

pub const BIN: &str = env!("CARGO_BIN_EXE_electrovac");

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("bad json ({e}):\n{}{}", self.stdout, self.stderr))
    }
}

pub fn run_env(args: &[&str], tol: Option<&str>) -> Run {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("ELECTROVAC_TOL");
    if let Some(t) = tol {
        cmd.env("ELECTROVAC_TOL", t);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn run(args: &[&str]) -> Run {
    run_env(args, None)
}

/// Reissner–Nordström samples on a logarithmic grid, with `V` optionally
/// multiplied by `1 + bump(r)`.
pub fn rn_table(n: usize, m: f64, q: f64, lo: f64, hi: f64, rows: usize, bump: impl Fn(f64) -> f64) -> String {
    let p = RNParameters::new(n, m, q).unwrap();
    let data = rn_data(&p);
    let mut s = String::from("# r A V Emag Psi\n");
    for i in 0..rows {
        let r = lo * (hi / lo).powf(i as f64 / (rows - 1) as f64);
        let a = data.metric_coefficient().jet(r).unwrap().value;
        let v = data.potential().jet(r).unwrap().value * (1.0 + bump(r));
        let e = data.field_magnitude().jet(r).unwrap().value;
        let psi = data.electric_potential().unwrap().jet(r).unwrap().value;
        s.push_str(&format!("{r:.17e} {a:.17e} {v:.17e} {e:.17e} {psi:.17e}\n"));
    }
    s
}

/// A smooth compactly supported bump of height `h` on `(c - w, c + w)`.
pub fn bump(c: f64, w: f64, h: f64) -> impl Fn(f64) -> f64 {
    move |r| {
        let t = (r - c) / w;
        if t.abs() < 1.0 {
            h * (1.0 - t * t).powi(4)
        } else {
            0.0
        }
    }
}

pub fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}
