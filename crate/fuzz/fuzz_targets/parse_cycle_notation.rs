#![no_main]

use libfuzzer_sys::fuzz_target;
use permword::Permutation;

fuzz_target!(|data: &str| {
    if let Ok(p) = Permutation::parse_cycles(data) {
        let back = Permutation::parse_cycles(&p.to_string()).expect("rendered cycles parse");
        assert_eq!(back, p);
    }
});
