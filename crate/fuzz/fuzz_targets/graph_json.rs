#![no_main]

use libfuzzer_sys::fuzz_target;
use permword::graph::{graph_from_json, graph_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(g) = graph_from_json(text) else { return };
    let back = serde_json::to_string(&graph_to_json(&g)).unwrap();
    assert_eq!(graph_from_json(&back).unwrap(), g);
});
