//! Anything the results reader accepts must survive a write/read cycle.

#![no_main]

use libfuzzer_sys::fuzz_target;
use nfield::harness::{read_csv, write_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(records) = read_csv(data) else {
        return;
    };
    let mut buf = Vec::new();
    write_csv(&records, &mut buf).unwrap();
    let again = read_csv(buf.as_slice()).unwrap();
    assert_eq!(again.len(), records.len());
    for (a, b) in records.iter().zip(&again) {
        assert_eq!(a.problem, b.problem);
        assert_eq!(a.n, b.n);
        assert_eq!(a.error.to_bits(), b.error.to_bits());
        assert_eq!(a.observed_order.map(f64::to_bits), b.observed_order.map(f64::to_bits));
    }
});
