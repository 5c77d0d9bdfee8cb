#![no_main]
use aig::WitnessTrace;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(w) = WitnessTrace::parse(text) {
            let back = WitnessTrace::parse(&w.to_text()).expect("rendered witness parses");
            assert_eq!(back, w);
            // replay on a fixed model must not panic, whatever the shape
            let model = aig::parse_aiger(aig::families::CNT2.as_bytes()).unwrap();
            let _ = w.verify(&model);
        }
    }
});
