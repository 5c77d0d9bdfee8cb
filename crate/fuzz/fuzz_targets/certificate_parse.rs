#![no_main]
use libfuzzer_sys::fuzz_target;
use mcheck::{CertificateFile, TranSys};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(file) = CertificateFile::parse(text) {
            assert_eq!(CertificateFile::parse(&file.to_text()).expect("rendered certificate parses"), file);
            // resolution and checking against a fixed model must not panic
            let model = aig::parse_aiger(aig::families::CNT2.as_bytes()).unwrap();
            let ts = TranSys::encode(&model, 0).unwrap();
            if let Ok(cert) = file.resolve(&ts) {
                if let mcheck::Certificate::KInduction { k, .. } = cert {
                    if k > 64 {
                        return;
                    }
                }
                let _ = mcheck::verify_certificate(&ts, &cert);
            }
        }
    }
});
