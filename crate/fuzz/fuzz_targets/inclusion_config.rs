#![no_main]

use jtower::config::parse_config;
use jtower::Error;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    match parse_config(text) {
        Ok(cfg) => {
            assert!(cfg.tol > 0.0);
            // Building the inclusion allocates every block, so keep it small.
            if let jtower::config::Source::Explicit { n, lambda, .. } = &cfg.source {
                let small = n.len() <= 4 && lambda.len() <= 4 && n.iter().chain(lambda.iter().flatten()).all(|&k| k <= 3);
                if !small {
                    return;
                }
            }
            let _ = cfg.inclusion();
        }
        Err(Error::Config { line, col, .. }) => {
            assert!(line >= 1 && line <= text.lines().count().max(1) + 1, "line {line} in {text:?}");
            assert!(col >= 1);
        }
        Err(e) => panic!("unexpected error kind: {e}"),
    }
});
