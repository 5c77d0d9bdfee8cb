//! Regenerate the fixture corpus: `cargo run -p aig --example write_fixtures -- <dir>`.

use aig::families::*;
use aig::random::{random_aig, RandomParams};
use aig::{parse_aiger, Aig};
use rand::rngs::StdRng;
use rand::SeedableRng;
use std::path::Path;

fn save(dir: &Path, name: &str, aig: &Aig) {
    std::fs::write(dir.join(format!("{name}.aag")), aig.to_aiger(true)).unwrap();
    std::fs::write(dir.join(format!("{name}.aig")), aig.to_aiger(false)).unwrap();
}

fn main() {
    let dir = std::env::args().nth(1).expect("usage: write_fixtures <dir>");
    let dir = Path::new(&dir);
    std::fs::create_dir_all(dir).unwrap();
    for (name, text) in [("safe1", SAFE1), ("unsafe1", UNSAFE1), ("cnt2", CNT2)] {
        save(dir, name, &parse_aiger(text.as_bytes()).unwrap());
    }
    for w in 3..=6 {
        save(dir, &format!("cnt{w}"), &counter(w, (1 << w) - 1, false));
        save(dir, &format!("cnt{w}_en"), &counter(w, (1 << w) - 1, true));
    }
    // hard-to-block family: values above the modulus are unreachable
    for w in 5..=8 {
        let m = (1u64 << w) * 6 / 10;
        save(dir, &format!("mod{w}_{m}"), &modular_counter(w, m, false));
    }
    save(dir, "reset_pair8", &reset_counter_pair(8));
    save(dir, "wrap4", &wrap_counter(4));
    save(dir, "constrained_shift", &constrained_shift());
    let mut symbols = counter(3, 5, true);
    symbols.trailer = b"i0 enable\nl0 q0\nl2 q2\nb0 hit5\nc\ngenerated fixture with symbols\n".to_vec();
    save(dir, "cnt3_symbols", &symbols);
    let mut rng = StdRng::seed_from_u64(2024);
    for i in 0..12 {
        let p = RandomParams {
            inputs: 1 + i % 3,
            latches: 3 + i % 6,
            gates: 10 + 4 * i,
            bads: 1 + i % 2,
            constraints: i % 3 / 2,
            one_init: 0.2,
            free_init: if i % 4 == 3 { 0.3 } else { 0.0 },
        };
        save(dir, &format!("random{i:02}"), &random_aig(&mut rng, &p));
    }
}
