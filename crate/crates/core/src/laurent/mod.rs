//! Integer Laurent polynomials `Z[t1^+-1, ..., tm^+-1]`, matrices over them,
//! and exact evaluation at torsion points of the torus.

mod character;
mod gcd;
mod matrix;
mod parse;
mod poly;
pub mod ring;

pub use character::{cyclic_resultant, cyclotomic, log_abs_or_zero, unit_root, CharacterPoint};
pub use gcd::{gcd, gcd_many};
pub use matrix::LaurentMat;
pub use poly::{Exponent, LaurentPoly};
