//! Kernel and hyperbolic geometry of the unit disk.
//!
//! All integrals downstream are taken against normalized area measure
//! (total mass 1), which makes the kernel `1/(1-z*conj(w))^(n+1)`
//! reproduce the Bergman space exactly and gives `<k_z, k_z> = 1`.

use num_complex::Complex64;

/// Ambient dimension. Only `n = 1` has a dyadic backend; the kernel
/// formulas are written for general `n` via the exponent `n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Dimension(pub u32);

impl Dimension {
    pub fn kernel_exponent(self) -> f64 {
        (self.0 + 1) as f64
    }
}

impl Default for Dimension {
    fn default() -> Self {
        Dimension(1)
    }
}

/// Hermitian pairing `z*conj(w)` summed over coordinates; for the disk
/// this is the scalar product of two complex numbers.
pub fn hermitian_pairing(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

/// Reproducing kernel `K(z, w) = 1/(1 - z*conj(w))^(n+1)` of the disk
/// (`n = 1`). Conjugate-symmetric: `K(z, w) = conj(K(w, z))`.
pub fn kernel(z: Complex64, w: Complex64) -> Complex64 {
    kernel_dim(z, w, Dimension(1))
}

pub fn kernel_dim(z: Complex64, w: Complex64, dim: Dimension) -> Complex64 {
    let d = Complex64::new(1.0, 0.0) - z * w.conj();
    d.powf(-dim.kernel_exponent())
}

/// Normalized kernel `k_z^(p)(w) = (1-|z|^2)^((n+1)/p') / (1 - z*conj(w))^(n+1)`.
///
/// `p = 2` gives the unit-norm reproducing kernel `k_z` with
/// `<k_z, k_z> = 1` against normalized area measure.
pub fn norm_kernel(z: Complex64, w: Complex64, p: f64) -> Complex64 {
    norm_kernel_dim(z, w, p, Dimension(1))
}

pub fn norm_kernel_dim(z: Complex64, w: Complex64, p: f64, dim: Dimension) -> Complex64 {
    debug_assert!(p > 1.0, "norm_kernel requires p in (1, inf)");
    let pp = p / (p - 1.0);
    let e = dim.kernel_exponent();
    (1.0 - z.norm_sqr()).powf(e / pp) * kernel_dim(z, w, dim)
}

/// Disk automorphism `phi_z(w) = (z - w)/(1 - conj(z)*w)` interchanging
/// `z` and `0`; involutive: `phi_z(phi_z(w)) = w`.
pub fn mobius(z: Complex64, w: Complex64) -> Complex64 {
    (z - w) / (Complex64::new(1.0, 0.0) - z.conj() * w)
}

/// Bergman metric `beta(z, w) = (1/2) log((1+|phi_z(w)|)/(1-|phi_z(w)|))`.
pub fn beta(z: Complex64, w: Complex64) -> f64 {
    let m = mobius(z, w).norm();
    0.5 * ((1.0 + m) / (1.0 - m)).ln()
}

/// Radius of the Bergman-metric ball `{beta(0, .) < t}` around the origin.
pub fn beta_ball_radius(t: f64) -> f64 {
    t.tanh()
}

/// Carleson tent membership: `w` lies in the tent over `apex`, the set
/// `{ |1 - conj(w) * apex/|apex|| < 1 - |apex| }`. The tent over `0` is
/// the whole disk.
pub fn in_carleson_tent(apex: Complex64, w: Complex64) -> bool {
    let t = 1.0 - apex.norm();
    if apex.norm() == 0.0 {
        return true;
    }
    let zeta = apex / apex.norm();
    (Complex64::new(1.0, 0.0) - w.conj() * zeta).norm() < t
}

/// Normalized area of the Carleson tent over an apex with modulus `|z|`:
/// the lens cut from the disk by the circle of radius `t = 1-|z|`
/// centered at the boundary point in the apex direction.
pub fn carleson_tent_measure(apex_modulus: f64) -> f64 {
    if apex_modulus == 0.0 {
        return 1.0;
    }
    let t = 1.0 - apex_modulus;
    let lens = (1.0 - t * t / 2.0).acos() + t * t * (t / 2.0).acos()
        - (t / 2.0) * (4.0 - t * t).sqrt();
    lens / std::f64::consts::PI
}

/// Boundary pseudo-metric `rho(zeta, eta) = |1 - zeta*conj(eta)|` for
/// unimodular points.
pub fn boundary_rho(zeta: Complex64, eta: Complex64) -> f64 {
    (Complex64::new(1.0, 0.0) - zeta * eta.conj()).norm()
}
