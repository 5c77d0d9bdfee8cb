#![no_main]
use libfuzzer_sys::fuzz_target;
use logic_form::Var;
use satcore::{Cnf, Solver};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cnf) = Cnf::parse(text) {
            assert_eq!(Cnf::parse(&cnf.to_text()).expect("rendered CNF parses"), cnf);
            if cnf.num_vars <= 64 && cnf.clauses.len() <= 256 {
                let mut s = Solver::new();
                if cnf.num_vars > 0 {
                    s.reserve_var(Var::new(cnf.num_vars - 1));
                }
                for c in &cnf.clauses {
                    s.add_clause(c);
                }
                let _ = s.solve(&[]);
            }
        }
    }
});

