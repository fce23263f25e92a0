#![no_main]

use hyperlandau::io::parse_particle_config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(cfg) = parse_particle_config(text) else {
        return;
    };
    assert!(!cfg.is_empty() && cfg.len() <= 12);
    assert!(cfg.z0() > 0.0 && cfg.z0().is_finite());
    let again = serde_json::to_string(&cfg).expect("accepted configs serialize");
    assert_eq!(parse_particle_config(&again).expect("serialized config parses"), cfg);
});
