//! Command-line tokens: a successful parse must print back to a token that
//! parses to the same value.

#![no_main]

use libfuzzer_sys::fuzz_target;
use nfield::harness::{Suite, Variant};
use nfield::problems::ProblemId;
use nfield::schemes::SchemeKind;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(id) = s.parse::<ProblemId>() {
        assert_eq!(id.to_string().parse::<ProblemId>().unwrap(), id);
    }
    if let Ok(kind) = s.parse::<SchemeKind>() {
        assert_eq!(kind.token().parse::<SchemeKind>().unwrap(), kind);
    }
    if let Ok(v) = s.parse::<Variant>() {
        assert_eq!(v.token().parse::<Variant>().unwrap(), v);
    }
    if let Ok(suite) = s.parse::<Suite>() {
        assert_eq!(suite.token().parse::<Suite>().unwrap(), suite);
    }
});
