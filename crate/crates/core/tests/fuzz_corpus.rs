//! Replays the checked-in fuzz seed corpora through the parsers on stable,
//! with the same invariants the fuzz targets assert.

use std::fs;
use std::path::PathBuf;

use hyperlandau::io::{parse_particle_config, parse_range, LevelRange, MAX_SPAN};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("corpus {}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn particle_config_seeds() {
    let cases = seeds("particle_config");
    assert!(cases.len() >= 5);
    let mut accepted = 0;
    for (name, text) in &cases {
        if let Ok(cfg) = parse_particle_config(text) {
            accepted += 1;
            assert!(!cfg.is_empty() && cfg.len() <= 12, "{name}");
            assert!(cfg.z0() > 0.0, "{name}");
            let again = serde_json::to_string(&cfg).unwrap();
            assert_eq!(parse_particle_config(&again).unwrap(), cfg, "{name}");
        }
    }
    assert!(accepted >= 3 && accepted < cases.len());
}

#[test]
fn level_range_seeds() {
    let cases = seeds("level_range");
    let mut outcomes = Vec::new();
    for (name, text) in &cases {
        let r = parse_range(text);
        if let Ok(LevelRange::Span { lo, hi }) = r {
            assert!(lo <= hi && hi - lo <= MAX_SPAN, "{name}");
        }
        outcomes.push((name.as_str(), r.is_ok()));
    }
    let expect = |n: &str| outcomes.iter().find(|(k, _)| *k == n).unwrap().1;
    assert!(expect("all") && expect("max_span") && expect("span") && expect("inclusive") && expect("single"));
    assert!(!expect("reversed") && !expect("dots") && !expect("too_long"));
}
