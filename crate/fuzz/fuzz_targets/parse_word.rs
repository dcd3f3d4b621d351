#![no_main]

use libfuzzer_sys::fuzz_target;
use permword::word::normal_form;
use permword::{Degrees, Word};

fuzz_target!(|data: &str| {
    let Ok(w) = data.parse::<Word>() else { return };
    // rendering must parse back to the same word
    let again: Word = w.to_string().parse().expect("rendered word parses");
    assert_eq!(again, w);
    if w.len() <= 4096 {
        let d: Degrees = "3,4,inf".parse().unwrap();
        let _ = normal_form(&w, &d);
    }
});
