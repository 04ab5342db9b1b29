//! Small-bias sample spaces and balanced binary linear codes, converted in
//! both directions with exhaustive certificates.

mod biased;
mod code;
mod convert;
mod format;

pub use biased::{BiasedSet, ExactBias};
pub use code::{BinaryCode, WeightSpectrum, MAX_ENUM_DIM};
pub use convert::{
    biased_to_code, code_to_biased, entropy_lower_bound, parse_ratio, welch_entropy_check, BiasedFromCode,
    CodeFromBiased, WelchEntropyCheck,
};
pub use format::{read_bset, read_code, write_bset, write_code};
