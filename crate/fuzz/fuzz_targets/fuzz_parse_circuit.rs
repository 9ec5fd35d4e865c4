#![no_main]

use libfuzzer_sys::fuzz_target;
use possim::qcir::parse_circuit;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(circuit) = parse_circuit(text) {
        let emitted = circuit.to_text();
        let reparsed = parse_circuit(&emitted).expect("emitted circuit text parses");
        assert_eq!(reparsed, circuit, "parse after emit must reproduce the circuit");
        assert_eq!(reparsed.to_text(), emitted, "emit must be stable");
    }
});
