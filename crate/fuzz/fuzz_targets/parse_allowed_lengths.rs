#![no_main]

use libfuzzer_sys::fuzz_target;
use permword::{AllowedLengths, Degrees};

fuzz_target!(|data: &str| {
    if let Ok(a) = data.parse::<AllowedLengths>() {
        let back: AllowedLengths = a.to_string().parse().expect("rendered set parses");
        assert_eq!(back, a);
        let _ = a.degree();
    }
    let _ = data.parse::<Degrees>();
});
