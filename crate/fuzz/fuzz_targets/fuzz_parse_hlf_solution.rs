#![no_main]

use libfuzzer_sys::fuzz_target;
use possim::hlf::parse_hlf_solution;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(solution) = parse_hlf_solution(text) {
        let emitted = solution.to_string();
        let reparsed = parse_hlf_solution(&emitted).expect("emitted solution text parses");
        assert_eq!(reparsed.to_string(), emitted, "emit must be stable");
    }
});
