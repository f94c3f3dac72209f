//! Laws of normalized ergodic sums and the experiments built on them.

mod distribution;
mod experiments;
mod scan;

pub use distribution::{normal_cdf, AtomDistribution, Segment};
pub use experiments::{
    clt_experiment, counterexample_experiment, normalized_distribution, parity_scan,
    vector_covariance, CltReport, CounterexampleReport, CovarianceMatrix2, NSelector,
    ParityFractions,
};
pub use scan::{
    c0_estimate, c0_ratio, gamma_condition_scan, record_variance, scan_sets, RecordVariance,
    ScanRecord, ScanReport, Thresholds, TIE_TOLERANCE,
};
