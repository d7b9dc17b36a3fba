//! Presentations of `H_1` of the infinite cyclic cover dual to a surface.
//!
//! Cutting a 3-manifold along a nonseparating surface `S` leaves `M'` with
//! boundary copies `S_+`, `S_-`. With `i_*: H_1(S) -> H_1(M')` (an `n x k`
//! integer matrix) and the gluing map `alpha_*: H_1(S_+) -> H_1(S_-)` written
//! on `H_1(S)` (a `k x k` matrix), the module `H_1` of the cover is presented
//! by `i_* (1 - t alpha_*)`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::Presentation;
use crate::error::{Error, Result};
use crate::laurent::{LaurentMat, LaurentPoly};
use crate::snf::{smith_normal_form, IntMatrix};

pub fn surface_gluing_presentation(i_star: &[Vec<i64>], alpha_star: &[Vec<i64>]) -> Result<Presentation> {
    let n = i_star.len();
    let k = i_star.first().map_or(0, Vec::len);
    if i_star.iter().any(|r| r.len() != k) {
        return Err(Error::Dimension("ragged i_* matrix".into()));
    }
    if alpha_star.len() != k || alpha_star.iter().any(|r| r.len() != k) {
        return Err(Error::Dimension(format!("alpha_* must be {k}x{k} to act on H_1(S)")));
    }
    let t = LaurentPoly::var(1, 0);
    let mut gluing = LaurentMat::identity(k, 1);
    for (a, row) in alpha_star.iter().enumerate() {
        for (b, &x) in row.iter().enumerate() {
            if x != 0 {
                let e = gluing.get(a, b) - &t.scale(&BigInt::from(x));
                gluing.set(a, b, e);
            }
        }
    }
    let i = LaurentMat::from_integers(1, i_star)?;
    let i = if n == 0 || k == 0 { LaurentMat::zeros(n, k, 1) } else { i };
    Ok(Presentation::new(i.multiply(&gluing)?))
}

/// `tau(M', S_+)`: the order of `H_1(M') / i_* H_1(S)`, which is `|det i_*|`
/// when `i_*` is square and nonsingular.
pub fn gluing_tau(i_star: &[Vec<i64>]) -> Result<BigInt> {
    let n = i_star.len();
    if i_star.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("tau(M', S_+) is only computed for square i_*".into()));
    }
    let snf = smith_normal_form(&IntMatrix::<BigInt>::from_i64_rows(i_star)?, false);
    if snf.rank < n {
        return Err(Error::Singular("i_* has a kernel, so H_1(M')/i_*H_1(S) is infinite".into()));
    }
    let tau = snf.torsion_order();
    debug_assert!(!tau.is_zero() && tau.is_positive());
    Ok(tau)
}
