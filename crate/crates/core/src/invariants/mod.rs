//! Zero-sum invariants and checks of the statements they rest on.

pub mod c0;
pub mod checks;
pub mod davenport;
pub mod rank2;

pub use crate::search::SearchReport;
pub use c0::{c0_exact, longest_regular_nonbasis, SearchOptions};
pub use checks::{
    cyclic_inverse_check, for_each_regular, kneser_check, lemma_st0_check, rank2_inverse_check,
    stabilizer, CyclicInverseReport, KneserReport, Rank2InverseReport, St0Outcome,
};
pub use davenport::{davenport, davenport_formula, davenport_search, DavenportMode};
pub use rank2::{
    extremal_sequence, known_invariants, lemma_basic_check, monte_carlo_theorem, shape_q,
    target_group, verify_extremal, BasicLemmaCertificate, CertificateVerdict, ExtremalReport,
    KnownInvariant, MonteCarloOptions, MonteCarloReport, RejectReason,
};
