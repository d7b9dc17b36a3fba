//! Eigenvalues of complex upper Hessenberg matrices by the shifted QR
//! iteration, and polynomial roots as eigenvalues of a balanced companion
//! matrix followed by one Newton step per root.

use num_complex::Complex;

use super::CMatrix;
use crate::scalar::Real;

const MAX_SWEEPS_PER_ROOT: usize = 60;

/// Roots of `sum_i c_i z^i` (ascending coefficients, `c_d != 0`), with
/// multiplicity. Zero roots from vanishing low coefficients are returned
/// exactly.
pub fn polynomial_roots<F: Real>(coeffs: &[Complex<F>]) -> Vec<Complex<F>> {
    let zero = Complex::new(F::zero(), F::zero());
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1] == zero {
        hi -= 1;
    }
    let coeffs = &coeffs[..hi];
    let lo = coeffs.iter().position(|&c| c != zero).unwrap_or(0);
    let core = &coeffs[lo..];
    let mut roots = vec![zero; lo];
    if core.len() <= 1 {
        return roots;
    }
    let d = core.len() - 1;
    if d == 1 {
        roots.push(-core[0] / core[1]);
        return roots;
    }
    let lead = core[d];
    // Companion matrix: first row -c_{d-1}/c_d, ..., -c_0/c_d; ones below.
    let mut h = CMatrix::zeros(d, d);
    for j in 0..d {
        h.set(0, j, -core[d - 1 - j] / lead);
    }
    for i in 1..d {
        h.set(i, i - 1, Complex::new(F::one(), F::zero()));
    }
    balance(&mut h);
    for z in hessenberg_eigenvalues(h) {
        roots.push(newton_polish(core, z));
    }
    roots
}

/// One Newton step, kept only if it reduces `|p|`.
fn newton_polish<F: Real>(c: &[Complex<F>], z: Complex<F>) -> Complex<F> {
    let (p, dp) = horner(c, z);
    if dp.norm() == F::zero() {
        return z;
    }
    let w = z - p / dp;
    if horner(c, w).0.norm() < p.norm() {
        w
    } else {
        z
    }
}

fn horner<F: Real>(c: &[Complex<F>], z: Complex<F>) -> (Complex<F>, Complex<F>) {
    let zero = Complex::new(F::zero(), F::zero());
    let mut p = zero;
    let mut dp = zero;
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Parlett-Reinsch balancing by powers of two; preserves the Hessenberg
/// structure and the spectrum.
fn balance<F: Real>(h: &mut CMatrix<F>) {
    let n = h.rows();
    let radix = F::of(2.0);
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = F::zero();
            let mut r = F::zero();
            for j in 0..n {
                if j != i {
                    c = c + h.get(j, i).l1_norm();
                    r = r + h.get(i, j).l1_norm();
                }
            }
            if c == F::zero() || r == F::zero() {
                continue;
            }
            let s = c + r;
            let mut f = F::one();
            let mut cc = c;
            while cc < r / radix {
                cc = cc * radix * radix;
                f = f * radix;
            }
            while cc > r * radix {
                cc = cc / (radix * radix);
                f = f / radix;
            }
            if (cc + r) / f < F::of(0.95) * s {
                converged = false;
                for j in 0..n {
                    h.set(i, j, h.get(i, j) / f);
                    h.set(j, i, h.get(j, i) * f);
                }
            }
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix (entries below the first
/// subdiagonal are ignored).
pub fn hessenberg_eigenvalues<F: Real>(mut h: CMatrix<F>) -> Vec<Complex<F>> {
    let n = h.rows();
    let zero = Complex::new(F::zero(), F::zero());
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let eps = F::epsilon();
    let mut hi = n - 1;
    let mut iter = 0usize;
    loop {
        if hi == 0 {
            out.push(h.get(0, 0));
            break;
        }
        // Find the start of the active unreduced block.
        let mut l = hi;
        while l > 0 {
            let s = h.get(l - 1, l - 1).l1_norm() + h.get(l, l).l1_norm();
            if h.get(l, l - 1).l1_norm() <= eps * s {
                h.set(l, l - 1, zero);
                break;
            }
            l -= 1;
        }
        if l == hi {
            out.push(h.get(hi, hi));
            hi -= 1;
            iter = 0;
            continue;
        }
        if l + 1 == hi {
            let (a, b) = eig2(h.get(hi - 1, hi - 1), h.get(hi - 1, hi), h.get(hi, hi - 1), h.get(hi, hi));
            out.push(a);
            out.push(b);
            if hi < 2 {
                break;
            }
            hi -= 2;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_SWEEPS_PER_ROOT {
            // Give up on this block: its diagonal is the best estimate.
            for i in (l..=hi).rev() {
                out.push(h.get(i, i));
            }
            if l == 0 {
                break;
            }
            hi = l - 1;
            iter = 0;
            continue;
        }
        let mu = if iter.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            h.get(hi, hi) + Complex::new(h.get(hi, hi - 1).norm() * F::of(0.75), F::zero())
        } else {
            let (a, b) = eig2(h.get(hi - 1, hi - 1), h.get(hi - 1, hi), h.get(hi, hi - 1), h.get(hi, hi));
            let d = h.get(hi, hi);
            if (a - d).norm() < (b - d).norm() {
                a
            } else {
                b
            }
        };
        qr_step(&mut h, l, hi, mu);
    }
    out
}

/// Eigenvalues of `[[a, b], [c, d]]`.
fn eig2<F: Real>(a: Complex<F>, b: Complex<F>, c: Complex<F>, d: Complex<F>) -> (Complex<F>, Complex<F>) {
    let half = F::of(0.5);
    let m = (a + d) * half;
    let disc = ((a - d) * half * ((a - d) * half) + b * c).sqrt();
    (m + disc, m - disc)
}

/// One shifted QR sweep `H - mu = QR`, `H <- RQ + mu` on rows/cols `l..=hi`.
fn qr_step<F: Real>(h: &mut CMatrix<F>, l: usize, hi: usize, mu: Complex<F>) {
    for i in l..=hi {
        h.set(i, i, h.get(i, i) - mu);
    }
    let mut rots = Vec::with_capacity(hi - l);
    for k in l..hi {
        let (c, s) = givens(h.get(k, k), h.get(k + 1, k));
        rots.push((c, s));
        for j in k..=hi {
            let x = h.get(k, j);
            let y = h.get(k + 1, j);
            h.set(k, j, x * c + s * y);
            h.set(k + 1, j, -s.conj() * x + y * c);
        }
    }
    for (t, &(c, s)) in rots.iter().enumerate() {
        let k = l + t;
        let top = (k + 2).min(hi);
        for i in l..=top {
            let x = h.get(i, k);
            let y = h.get(i, k + 1);
            h.set(i, k, x * c + y * s.conj());
            h.set(i, k + 1, -x * s + y * c);
        }
    }
    for i in l..=hi {
        h.set(i, i, h.get(i, i) + mu);
    }
}

/// `G = [[c, s], [-conj(s), c]]` with real `c` and `G [x; y] = [r; 0]`.
fn givens<F: Real>(x: Complex<F>, y: Complex<F>) -> (F, Complex<F>) {
    let ny = y.norm();
    if ny == F::zero() {
        return (F::one(), Complex::new(F::zero(), F::zero()));
    }
    let nx = x.norm();
    if nx == F::zero() {
        return (F::zero(), y.conj() / ny);
    }
    let r = nx.hypot(ny);
    let phase = x / nx;
    (nx / r, phase * y.conj() / r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    fn sorted_re(mut v: Vec<Complex<f64>>) -> Vec<f64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v.iter().map(|z| z.re).collect()
    }

    #[test]
    fn quadratic_roots() {
        // t^2 - 3t + 1 = 0 at (3 +- sqrt 5)/2.
        let r = polynomial_roots(&[re(1.0), re(-3.0), re(1.0)]);
        let s = sorted_re(r);
        assert!((s[0] - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-14);
        assert!((s[1] - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn roots_of_unity() {
        let mut c = vec![re(0.0); 13];
        c[0] = re(-1.0);
        c[12] = re(1.0);
        let r = polynomial_roots(&c);
        assert_eq!(r.len(), 12);
        for z in &r {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z.powu(12) - re(1.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn zero_roots_split_off() {
        let r = polynomial_roots(&[re(0.0), re(0.0), re(-2.0), re(1.0)]);
        assert_eq!(r.len(), 3);
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 2);
    }

    #[test]
    fn wilkinson_like_polynomial() {
        // prod_{k=1}^{10} (z - k)
        let mut c = vec![re(1.0)];
        for k in 1..=10 {
            let mut next = vec![re(0.0); c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * k as f64;
            }
            c = next;
        }
        let s = sorted_re(polynomial_roots(&c));
        for (k, x) in s.iter().enumerate() {
            assert!((x - (k + 1) as f64).abs() < 1e-6, "{x}");
        }
    }

    #[test]
    fn complex_coefficients() {
        // (z - i)(z + 2) = z^2 + (2 - i) z - 2i
        let c = [Complex::new(0.0, -2.0), Complex::new(2.0, -1.0), re(1.0)];
        let r = polynomial_roots(&c);
        assert!(r.iter().any(|z| (z - Complex::new(0.0, 1.0)).norm() < 1e-13));
        assert!(r.iter().any(|z| (z - re(-2.0)).norm() < 1e-13));
    }

    #[test]
    fn single_precision() {
        let r = polynomial_roots(&[Complex::new(2.0f32, 0.0), Complex::new(-3.0, 0.0), Complex::new(1.0, 0.0)]);
        let mut s: Vec<f32> = r.iter().map(|z| z.re).collect();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((s[0] - 1.0).abs() < 1e-5 && (s[1] - 2.0).abs() < 1e-5);
    }
}
