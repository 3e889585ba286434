//! Firing-distance densities for the constant-sum game (c = 1/n) and the
//! prize competition (c = 0), written as two CSV files ready for plotting.
//!
//!     cargo run --example figures -- [OUT_DIR]

use std::fs;
use std::path::PathBuf;

use silent_duel::cli;

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    fs::create_dir_all(&dir).expect("create output directory");
    for case in ["constant-sum", "prize"] {
        let path = dir.join(format!("{case}.csv"));
        let out = cli::execute([
            "silent-duel",
            "figure",
            "--case",
            case,
            "--n-list",
            "2,4,6",
            "--out",
            path.to_str().expect("utf-8 path"),
        ])
        .expect("figure command");
        assert_eq!(out.code, 0);
        println!("wrote {}", path.display());
    }
}
