#![no_main]

use hyperlandau::io::{parse_range, LevelRange, MAX_SPAN};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    match parse_range(text) {
        Ok(LevelRange::Span { lo, hi }) => {
            assert!(lo <= hi);
            assert!(hi - lo <= MAX_SPAN);
            let labels = LevelRange::Span { lo, hi }.labels(None).expect("spans are finite");
            assert_eq!(labels.len() as u64, u64::from(hi - lo) + 1);
        }
        Ok(LevelRange::All) => {
            assert_eq!(LevelRange::All.labels(Some(5)).map(|v| v.len()), Some(5));
            assert!(LevelRange::All.labels(None).is_none());
        }
        Err(_) => {}
    }
});
