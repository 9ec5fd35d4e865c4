#![no_main]

use libfuzzer_sys::fuzz_target;
use possim::bcir::parse_netlist;
use possim::f2::F2Vector;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(circuit) = parse_netlist(text) {
        circuit.validate().expect("parsed netlists are structurally valid");
        let emitted = circuit.to_text();
        let reparsed = parse_netlist(&emitted).expect("emitted netlist text parses");
        assert_eq!(reparsed.to_text(), emitted, "emit must be stable");
        if circuit.n_inputs() <= 64 {
            circuit
                .eval(&F2Vector::zeros(circuit.n_inputs()))
                .expect("valid netlists evaluate");
        }
    }
});
