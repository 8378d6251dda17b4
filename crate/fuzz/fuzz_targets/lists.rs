#![no_main]

use libfuzzer_sys::fuzz_target;
use nfield::harness::{parse_f64_list, parse_n_values, parse_problems};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ns) = parse_n_values(s) {
        assert!(ns.windows(2).all(|w| w[0] < w[1]));
        assert!(ns.iter().all(|&n| n > 0));
    }
    if let Ok(hs) = parse_f64_list(s) {
        assert!(hs.iter().all(|h| h.is_finite() && *h > 0.0));
    }
    if let Ok(ids) = parse_problems(s) {
        let joined = ids.iter().map(|id| id.to_string()).collect::<Vec<_>>().join(",");
        assert_eq!(parse_problems(&joined).unwrap(), ids);
    }
});
