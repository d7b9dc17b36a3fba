//! Alexander polynomials, Mahler measures, Fuglede–Kadison determinants and
//! the torsion homology of finite abelian covers.
//!
//! Exact algebra lives in [`laurent`], [`alexmod`], [`snf`] and [`covers`];
//! floating-point work is generic over [`scalar::Real`] and sits in
//! [`mahler`] and [`numeric`]. Group presentations enter through
//! [`foxcalc`].

pub mod alexmod;
pub mod covers;
pub mod error;
pub mod foxcalc;
pub mod lattice;
pub mod laurent;
pub mod mahler;
pub mod numeric;
pub mod scalar;
pub mod snf;

pub use alexmod::{ChainComplex, Presentation};
pub use error::{Error, Result};
pub use lattice::Sublattice;
pub use laurent::{CharacterPoint, LaurentMat, LaurentPoly};

use num_bigint::BigInt;

/// Integer matrices with unbounded entries.
pub type BigMatrix = snf::IntMatrix<BigInt>;
pub type BigSmithForm = snf::SmithForm<BigInt>;
pub type MahlerEstimate64 = mahler::MahlerEstimate<f64>;
pub type MahlerEstimate32 = mahler::MahlerEstimate<f32>;
pub type FkEstimate64 = mahler::FkEstimate<f64>;
pub type L2TorsionReport64 = mahler::L2TorsionReport<f64>;
