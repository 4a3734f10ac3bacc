//! Replays the checked-in fuzz corpus through each parser entry point.

use std::fs;
use std::path::PathBuf;

use poncelet_cli::config::{parse_centers, parse_grid, ConfigPatch, RunConfig};
use poncelet_core::centers::CenterTable;
use poncelet_core::expr::parse_expr;
use poncelet_core::fixtures::Fixture;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn expr_seeds() {
    let mut parsed = 0;
    for (name, src) in seeds("expr") {
        if let Ok(e) = parse_expr(&src) {
            parsed += 1;
            let _ = e.eval(3.0, 4.0, 5.0);
            let _ = e.is_squared_rational();
            let _ = e.rotated().eval(1.0, 1.0, 1.0);
        } else {
            assert!(["unbalanced", "deep"].contains(&name.as_str()), "{name} should parse");
        }
    }
    assert!(parsed >= 10);
}

#[test]
fn center_table_seeds() {
    for (name, text) in seeds("center_table") {
        let res = CenterTable::parse(&text);
        assert_eq!(res.is_ok(), ["builtin", "small"].contains(&name.as_str()), "{name}: {res:?}");
        if let Ok(t) = res {
            for k in t.indices() {
                let _ = t.get(k).unwrap().weights([3.0, 4.0, 5.0]);
            }
        }
    }
}

#[test]
fn fixture_seeds() {
    for (name, text) in seeds("fixture") {
        let res = Fixture::parse(&text);
        let bad = ["overlap", "no_family", "duplicate"].contains(&name.as_str());
        assert_eq!(res.is_err(), bad, "{name}: {res:?}");
        if let Ok(f) = res {
            assert!(f.indices().iter().all(|&k| f.expected(k).is_some()));
        }
    }
}

#[test]
fn config_seeds() {
    for (name, text) in seeds("config") {
        let valid = ConfigPatch::parse(&text).map_err(|e| e.to_string()).and_then(|p| {
            RunConfig::from_patch(p).map(|_| ()).map_err(|e| e.to_string())
        });
        let good = ["trace", "verify", "axes"].contains(&name.as_str());
        assert_eq!(valid.is_ok(), good, "{name}: {valid:?}");
        let _ = parse_centers(&text);
        let _ = parse_grid(&text);
    }
}
