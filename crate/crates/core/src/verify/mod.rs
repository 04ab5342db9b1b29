//! Certificates for a concrete matrix and for the number-theoretic
//! ingredients behind the construction.

mod bias;
mod charsum;
mod coherence;
mod eigen;
mod fro;
mod matching;
mod provenance;
mod rip;
mod scan;
mod support;
mod symtab;

pub use bias::{bias_exact, bias_sampled, BiasReport, DEFAULT_BIAS_MAX_H};
pub use charsum::{charsum_check, CharSumCheck, CHARSUM_CONSTANT, CHARSUM_RANGE_BUDGET, CHARSUM_SOFT_BELOW};
pub use coherence::{coherence, welch_floor, CoherenceReport, WELCH_SLACK};
pub use eigen::{condition_estimate, gram_deviation, symmetric_eigenvalues, EIGEN_TOL};
pub use fro::{fro_constant, fro_pair_count, FroReport};
pub use matching::{double_factorial, matching_coloring_count, MatchingCheck, MATCHING_MAX_Q};
pub use provenance::{provenance_check, ProvenanceCheck};
pub use rip::{rip_constant, round_sig12, RipMode, RipReport};
pub use scan::{conjecture_scan, BaselineRow, PrimeSelection, ScanReport, ScanRow, Spread};
pub use support::{binomial, supports_up_to, DEFAULT_SUPPORT_BUDGET};
