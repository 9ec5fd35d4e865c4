#![no_main]

use libfuzzer_sys::fuzz_target;
use possim::hlf::{parse_hlf_instance, solve_hlf, verify_hlf, DEFAULT_VERIFY_BUDGET};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(instance) = parse_hlf_instance(text) {
        let emitted = instance.to_text();
        let reparsed = parse_hlf_instance(&emitted).expect("emitted instance text parses");
        assert_eq!(reparsed.to_text(), emitted, "emit must be stable");
        if instance.m() <= 64 {
            // Every symmetric instance is solvable, so the solver must
            // produce a verifiable answer for anything the parser accepts.
            let solution = solve_hlf(&instance).expect("symmetric instances are solvable");
            assert!(verify_hlf(&instance, &solution, DEFAULT_VERIFY_BUDGET));
        }
    }
});
