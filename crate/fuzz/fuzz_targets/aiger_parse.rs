#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Parsing must never panic; whatever parses must survive a rewrite.
    if let Ok(aig) = aig::parse_aiger(data) {
        let ascii = aig.to_aiger(true);
        assert_eq!(aig::parse_aiger(&ascii).expect("ascii rewrite parses"), aig);
        let binary = aig.to_aiger(false);
        let again = aig::parse_aiger(&binary).expect("binary rewrite parses");
        assert_eq!(again.to_aiger(false), binary);
    }
});
