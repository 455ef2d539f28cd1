//! Replays the checked-in fuzz seeds through the fuzz-target assertions.

use std::path::PathBuf;

use discordctl::{format_csv, format_state, parse_csv, parse_state_str, parse_state_text};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn state_seeds() {
    let mut valid = 0;
    for (path, text) in seeds("parse_state") {
        if let Ok(file) = parse_state_text(&text) {
            assert_eq!(file.matrix.dim(), file.dims.iter().product::<usize>());
        }
        if let Ok(rho) = parse_state_str(&text, 1e-10) {
            valid += 1;
            let again = parse_state_str(&format_state(&rho), 1e-10)
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(again.dims(), rho.dims());
        }
    }
    assert!(valid > 0);
}

#[test]
fn csv_seeds() {
    for (path, text) in seeds("parse_csv") {
        if let Ok(rows) = parse_csv(&text) {
            let again = parse_csv(&format_csv(&rows)).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(again, rows);
        }
    }
}
