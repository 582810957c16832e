#![allow(dead_code)]

use std::path::PathBuf;

/// One row of a golden oracle table: `j` followed by its value columns.
pub struct GoldenRow {
    pub j: u64,
    pub values: Vec<f64>,
}

pub struct Golden {
    pub nonfactor_ceiling: f64,
    pub rows: Vec<GoldenRow>,
}

impl Golden {
    pub fn column(&self, j: u64, col: usize) -> f64 {
        self.rows
            .iter()
            .find(|r| r.j == j)
            .unwrap_or_else(|| panic!("no golden row for j={j}"))
            .values[col]
    }
}

pub fn golden(name: &str) -> Golden {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut ceiling = None;
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(comment) = line.strip_prefix("# ") {
            if let Some(v) = comment.strip_prefix("nonfactor_ceiling=") {
                ceiling = Some(v.parse().unwrap());
            }
            continue;
        }
        let mut fields = line.split(',');
        let j = fields.next().unwrap().parse().unwrap();
        let values = fields.map(|f| f.parse().unwrap()).collect();
        rows.push(GoldenRow { j, values });
    }
    Golden {
        nonfactor_ceiling: ceiling.expect("golden file lacks a nonfactor_ceiling header"),
        rows,
    }
}

/// Prints one verdict line and fails the test if any check failed.
pub fn verdict(name: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("[PASS] {name}");
    } else {
        println!("[FAIL] {name}");
        for f in failures {
            println!("       {f}");
        }
        panic!("{name}: {} check(s) failed", failures.len());
    }
}

pub fn check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}
