//! Bit-level safety model checking of AIGER circuits.

pub mod bmc;
pub mod certificate;
pub mod ic3;
pub mod kind;
pub mod portfolio;
pub mod transys;
pub mod verdict;

pub use certificate::{verify_certificate, verify_witness, CertificateError, CertificateFile};
pub use transys::{SignalPolicy, TranSys};
pub use verdict::{Cancel, Certificate, Verdict};
