//! Covering numbers and universality.

pub mod cover;
pub mod fourier_cover;
pub mod mult;
pub mod universality;

pub use cover::{cov, cov_exact, cov_exact_with, cov_greedy, verify_cover, CoverOptions, CoverStatus, CoverWitness};
pub use fourier_cover::{cov_fourier_constrained, FourierCoverOutcome};
pub use mult::{cov_mult, un_mult, DlogTable, MultCover, MultUniversality};
pub use universality::{
    u_n, un_bruteforce, un_by_profiles, un_exact, un_exact_with, UProfileEntry, UnValue, UniversalityReport,
};
