//! Universality and covering numbers of subsets of finite abelian groups.
//!
//! The crate computes `cov(A; E)`, `un(A)`, `U_n(A)`, Fourier-side quantities
//! (spectra, Wiener norms, `E_k` norms, Bohr sets) and checks the inequalities
//! that relate them on concrete instances.

pub mod cyclotomic;
pub mod error;
pub mod fourier;
pub mod group;
pub mod scalar;
pub mod set;
pub mod setops;
pub mod solver;
pub mod constructions;
pub mod verify;

pub use error::{Error, Result};
pub use fourier::{BohrSpec, DensityFunction, SpectrumSet};
pub use group::{CharacterIndex, Element, Group, RootOfUnity};
pub use set::{parse_set_literal, GroupSet};
pub use setops::TupleSpec;

/// Floating-point density function.
pub type Density64 = DensityFunction<f64>;
/// Single-precision density function.
pub type Density32 = DensityFunction<f32>;
/// Exact rational density function.
pub type DensityQ = DensityFunction<num_rational::BigRational>;
/// Complex density function, the domain of the transform.
pub type DensityC64 = DensityFunction<num_complex::Complex64>;
/// Integer counts such as representation functions.
pub type Counts = DensityFunction<i64>;
