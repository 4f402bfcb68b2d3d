//! Case assignment, Kesten tests and the rule engine deciding (H).

mod cases;
mod engine;

pub use cases::{bretagnolle_case, case_hitting_set, is_compound_poisson, kesten_hitting, BretagnolleCase, CaseLabel, HittingSet, KestenResult};
pub use engine::{h_verdict, h_verdict_sum, h_verdict_with, Assertions, ChainEntry, HReport, Source};
