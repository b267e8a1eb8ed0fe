//! Free-space dyadic Green's function and the radiative rates built from it.
//!
//! ```text
//! G(R; ω) = −(k e^{ikR}/4π) [ ℙ/(kR) + iℚ/(kR)² − ℚ/(kR)³ ],   k = ω/c
//! ℙ = 𝕀 − R̂R̂,   ℚ = 𝕀 − 3R̂R̂
//! ```
//!
//! With this sign convention `Im G` is negative at coincidence, so that
//! spontaneous rates `−2ω²μ·Im G·μ` come out positive.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A symmetric 3×3 complex dyadic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenTensor(pub [[Complex64; 3]; 3]);

impl GreenTensor {
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[i][j]
    }

    pub fn transpose(&self) -> Self {
        let mut t = self.0;
        for (i, row) in self.0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t[j][i] = *v;
            }
        }
        GreenTensor(t)
    }

    /// `u·G·v` for real vectors.
    pub fn contract(&self, u: &[f64; 3], v: &[f64; 3]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                acc += self.0[i][j] * (u[i] * v[j]);
            }
        }
        acc
    }

    /// Polarization average `Tr(G)/3`, i.e. `⟨û·G·û⟩` over isotropic `û`.
    pub fn isotropic_average(&self) -> Complex64 {
        (self.0[0][0] + self.0[1][1] + self.0[2][2]) / 3.0
    }

    /// Frobenius norm of `G − Gᵀ`.
    pub fn asymmetry(&self) -> f64 {
        let t = self.transpose();
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += (self.0[i][j] - t.0[i][j]).norm_sqr();
            }
        }
        s.sqrt()
    }
}

pub type Matrix3 = [[f64; 3]; 3];

/// Transverse and longitudinal projectors `(ℙ, ℚ)` for displacement `r`.
pub fn projectors(r: &[f64; 3]) -> Result<(Matrix3, Matrix3)> {
    let len = norm(r);
    if !(len > 0.0) {
        return Err(Error::CoincidentPoints);
    }
    let rh = [r[0] / len, r[1] / len, r[2] / len];
    let mut p = [[0.0; 3]; 3];
    let mut q = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let id = if i == j { 1.0 } else { 0.0 };
            let outer = rh[i] * rh[j];
            p[i][j] = id - outer;
            q[i][j] = id - 3.0 * outer;
        }
    }
    Ok((p, q))
}

/// Dyadic Green's function at displacement `r` and angular frequency `omega`.
pub fn green_dyadic(r: &[f64; 3], omega: f64) -> Result<GreenTensor> {
    if !(omega > 0.0) {
        return Err(Error::invalid("omega", omega, "must be positive"));
    }
    let (p, q) = projectors(r)?;
    let k = omega;
    let x = k * norm(r);
    let phase = Complex64::from_polar(1.0, x);
    let pref = -k * phase / (4.0 * PI);
    let a = Complex64::new(1.0 / x, 0.0);
    let b = Complex64::new(-1.0 / (x * x * x), 1.0 / (x * x));
    let mut g = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = pref * (a * p[i][j] + b * q[i][j]);
        }
    }
    Ok(GreenTensor(g))
}

/// Coincidence limit `R→0⁺` of `μ̂·Im G(R; ω)·μ̂`, equal to `−k/(6π)`.
///
/// Only the imaginary part is finite at coincidence; the divergent real part
/// is a level-shift renormalization and is not represented.
pub fn im_green_coincident(omega: f64) -> f64 {
    -omega / (6.0 * PI)
}

/// Free-space spontaneous rate `−2ω²·d²·Im G(0⁺; ω) = d²ω³/(3π)`.
pub fn decay_rate(omega: f64, dipole_sq: f64) -> f64 {
    -2.0 * omega * omega * dipole_sq * im_green_coincident(omega)
}

fn norm(r: &[f64; 3]) -> f64 {
    (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn projectors_along_z() {
        let (p, q) = projectors(&[0.0, 0.0, 2.5]).unwrap();
        assert_eq!(p, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]);
        assert_eq!(q, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -2.0]]);
    }

    #[test]
    fn zero_separation_rejected() {
        assert_eq!(green_dyadic(&[0.0; 3], 1.0), Err(Error::CoincidentPoints));
    }

    #[test]
    fn far_field_is_transverse_spherical_wave() {
        let k = 2.0;
        let r = 1.0e6 / k;
        let g = green_dyadic(&[0.0, 0.0, r], k).unwrap();
        let transverse = g.contract(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]);
        let leading = -k * Complex64::from_polar(1.0, k * r) / (4.0 * PI * k * r);
        assert!(((transverse - leading) / leading).norm() <= 1.0e-6 * 1.0001);
        // ℚ terms die off relative to ℙ.
        let longitudinal = g.contract(&[0.0, 0.0, 1.0], &[0.0, 0.0, 1.0]);
        assert!(longitudinal.norm() / transverse.norm() < 3.0e-6);
    }

    #[test]
    fn coincidence_limit_by_richardson() {
        // Oracle: evaluate the full dyadic at small kR, average over
        // polarizations, and extrapolate the O((kR)²) error away.
        let k = 3.0;
        let dir = [0.3, -0.5, 0.81];
        let n = norm(&dir);
        let at = |x: f64| {
            let s = x / k / n;
            green_dyadic(&[dir[0] * s, dir[1] * s, dir[2] * s], k)
                .unwrap()
                .isotropic_average()
                .im
        };
        let exact = im_green_coincident(k);
        let (a, b, c) = (at(1e-1), at(1e-2), at(1e-3));
        // Error shrinks like (kR)².
        assert!(((b - exact) / (a - exact)).abs() < 0.011);
        assert!((c - exact).abs() < 1e-6 * exact.abs());
        let extrap = (100.0 * b - a) / 99.0;
        assert_relative_eq!(extrap, exact, max_relative = 1e-8);
        assert_relative_eq!(exact, -k / (6.0 * PI), max_relative = 1e-15);
    }

    #[test]
    fn coincidence_is_linear_in_k() {
        assert_relative_eq!(
            im_green_coincident(2.0 * 7.0),
            2.0 * im_green_coincident(7.0),
            max_relative = 1e-15
        );
    }

    #[test]
    fn decay_rate_closure() {
        let omega0 = 1.0e4;
        let gamma0 = 1.0;
        let mu2 = crate::params::dipole_sq_for_rate(gamma0, omega0);
        assert_relative_eq!(decay_rate(omega0, mu2), gamma0, max_relative = 1e-14);
        assert_relative_eq!(
            mu2,
            3.0 * PI * gamma0 / omega0.powi(3),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            decay_rate(2.0 * omega0, mu2),
            8.0 * gamma0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn upper_rate_matches_pump_denominator() {
        let atom = crate::AtomParams::default();
        let mu2 = atom.upper_dipole_sq().unwrap();
        let rate = decay_rate(atom.upper_emission_frequency(), mu2);
        assert_relative_eq!(rate, atom.gamma_u, max_relative = 1e-14);
    }

    proptest! {
        #[test]
        fn symmetric_and_reciprocal(
            x in -5.0..5.0f64, y in -5.0..5.0f64, z in -5.0..5.0f64,
            omega in 0.01..20.0f64,
        ) {
            prop_assume!(x * x + y * y + z * z > 1e-6);
            let g = green_dyadic(&[x, y, z], omega).unwrap();
            prop_assert!(g.asymmetry() == 0.0);
            let h = green_dyadic(&[-x, -y, -z], omega).unwrap();
            prop_assert_eq!(g, h);
        }
    }
}
