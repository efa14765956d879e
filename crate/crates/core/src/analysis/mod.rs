//! Tiered decision procedures for negative-dependence properties.

pub mod lp;
pub mod nice;
pub mod properties;
pub mod search;
pub mod sos;
pub mod verdict;

pub use nice::{nice_extension_weights, NiceExtensionReport};
pub use properties::{
    c_rayleigh_verdict, designated_pair, hpp_verdict, is_balanced, min_c_estimate, neg_corr,
    neg_corr_all_pairs, nlc_check, rayleigh_verdict, strong_rayleigh_all_pairs,
    strong_rayleigh_verdict, MinCReport, PairScope, SearchConfig,
};
pub use search::{counterexample_search, Domain, SearchOutcome};
pub use sos::{is_psd_exact, sos_certificate, sos_certificate_squared, verify_certificate};
pub use verdict::{
    Certificate, Diagnostics, GramCertificate, Outcome, OutcomeKind, Tier, Verdict, Witness,
};
