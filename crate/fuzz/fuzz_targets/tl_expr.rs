#![no_main]

use jtower::tl::{markov_trace, parse_expression};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let Ok(x) = parse_expression(text) else { return };
    for (m, _) in x.terms() {
        assert!(m.is_jones_normal(), "{m} in {text:?}");
    }
    if let Some(g) = x.max_generator() {
        let level = g as usize + 1;
        markov_trace(&x, level).unwrap();
        assert!(markov_trace(&x, g as usize).is_err());
    }
});
