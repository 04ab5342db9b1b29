//! Sparse recovery by orthogonal matching pursuit, used to exercise the
//! constructed matrices as compressive sensors.

mod omp;
mod sweep;

pub use omp::{omp_recover, OmpResult, SparseSignal, MAX_CONDITION};
pub use sweep::{phase_sweep, Ensemble, SweepRow, SweepTable, SWEEP_HEADER, SWEEP_NOISE_TOL, VALUE_TOLERANCE};
