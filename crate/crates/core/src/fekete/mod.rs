//! Lower-bound estimation of the n-th diameters `d_n(E)` by maximizing
//! generalized Vandermonde determinants over membership-oracle sets,
//! including preimage sets `F^{-1}E`.
//!
//! All reported `d_n` values are certified lower bounds: any feasible
//! configuration under-approximates the supremum in the definition, and the
//! search only ever accepts strict improvements. Restarts run concurrently
//! on independent seeded streams and reduce by best determinant with ties
//! broken by restart index, so results are schedule-independent.

mod optimize;
mod oracle;
mod preimage;
mod vandermonde;

pub use optimize::{
    diam_sequence, dn_estimate, exchange_optimize, greedy_leja, polydisc_hadamard_bound,
    restart_seeds, Budget, DiamRow, DiamSequence, FeketeConfiguration,
};
pub use oracle::{
    parse_basic_set, BallOracle, IntervalOracle, PointSetOracle, PolydiscOracle, SetOracle,
};
pub(crate) use oracle::gaussian as oracle_gaussian;
pub use preimage::{preimage_oracle, pullback_check, PreimageOracle, PullbackReport};
pub use vandermonde::{vandermonde_logabsdet, vandermonde_logabsdet_scaled};
