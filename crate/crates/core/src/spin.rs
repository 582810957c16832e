//! Spin-1/2 rotation algebra on the Bloch sphere.
//!
//! Every propagator of a single spin-1/2 is an SU(2) element, which acts on
//! the expectation vector (<Ix>, <Iy>, <Iz>) as an SO(3) rotation. Rotations
//! are stored as unit quaternions (the SU(2) parametrization) and act
//! right-handed: a positive angle about z carries x towards y.

use std::ops::Mul;

use nalgebra::{Unit, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Expectation values of Ix, Iy, Iz for one spin packet, scaled so a fully
/// polarized packet has norm 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochState {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        BlochState { x, y, z }
    }

    /// Thermal equilibrium: full longitudinal polarization.
    pub const fn longitudinal() -> Self {
        BlochState::new(0.0, 0.0, 1.0)
    }

    /// Transverse magnetization along x, as left by an excitation pulse.
    pub const fn transverse_x() -> Self {
        BlochState::new(1.0, 0.0, 0.0)
    }

    pub fn norm(&self) -> f64 {
        self.as_vector().norm()
    }

    /// `(x, y)` as the complex transverse magnetization `x + i y`.
    pub fn transverse(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.x, self.y)
    }

    fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }
}

impl From<Vector3<f64>> for BlochState {
    fn from(v: Vector3<f64>) -> Self {
        BlochState::new(v.x, v.y, v.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation(UnitQuaternion<f64>);

impl Rotation {
    pub fn identity() -> Self {
        Rotation(UnitQuaternion::identity())
    }

    /// Rotation by `angle` about `axis`. The axis is normalized here; a zero
    /// axis yields the identity.
    pub fn about_axis(axis: [f64; 3], angle: f64) -> Self {
        let v = Vector3::from(axis);
        match Unit::try_new(v, 0.0) {
            Some(axis) => Rotation(UnitQuaternion::from_axis_angle(&axis, angle)),
            None => Rotation::identity(),
        }
    }

    pub fn inverse(&self) -> Self {
        Rotation(self.0.inverse())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Rotation) -> Self {
        Rotation(next.0 * self.0)
    }

    /// Rotation angle in `[0, π]`.
    pub fn angle(&self) -> f64 {
        self.0.angle()
    }

    /// Unit rotation axis, or `None` for the identity.
    pub fn axis(&self) -> Option<[f64; 3]> {
        self.0.axis().map(|a| [a.x, a.y, a.z])
    }

    /// Row-major 3x3 orthogonal matrix acting on Bloch vectors.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let m = self.0.to_rotation_matrix();
        let m = m.matrix();
        std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)]))
    }

    /// SU(2) entries `(a, b)` of `U = [[a, -b*], [b, a*]]`.
    pub fn su2(&self) -> (num_complex::Complex64, num_complex::Complex64) {
        let q = self.0.quaternion();
        // exp(-i θ n·σ/2) = cos(θ/2) - i sin(θ/2) n·σ
        let a = num_complex::Complex64::new(q.w, -q.k);
        let b = num_complex::Complex64::new(q.j, -q.i);
        (a, b)
    }
}

impl Default for Rotation {
    fn default() -> Self {
        Rotation::identity()
    }
}

/// Matrix-style product: `(a * b)` applies `b` first, then `a`.
impl Mul for Rotation {
    type Output = Rotation;

    fn mul(self, rhs: Rotation) -> Rotation {
        Rotation(self.0 * rhs.0)
    }
}

/// RF pulse of flip angle `theta` about the in-plane axis `(cos phi, sin phi, 0)`.
pub fn pulse(theta: f64, phi: f64) -> Rotation {
    let (sin, cos) = phi.sin_cos();
    Rotation(UnitQuaternion::from_axis_angle(
        &Unit::new_normalize(Vector3::new(cos, sin, 0.0)),
        theta,
    ))
}

/// Precession about z, as produced by a field gradient.
pub fn z_rotation(alpha: f64) -> Rotation {
    Rotation(UnitQuaternion::from_axis_angle(&Vector3::z_axis(), alpha))
}

/// Collapses a pulse train into one rotation. The first element acts first.
pub fn compose(seq: &[Rotation]) -> Result<Rotation> {
    let (first, rest) = seq.split_first().ok_or(Error::EmptySequence)?;
    Ok(rest.iter().fold(*first, |acc, r| acc.then(r)))
}

pub fn apply(r: &Rotation, s: &BlochState) -> BlochState {
    (r.0 * s.as_vector()).into()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use proptest::prelude::*;

    use super::*;

    /// Rodrigues matrix, independent of the quaternion path.
    fn rodrigues(axis: [f64; 3], angle: f64) -> [[f64; 3]; 3] {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let [x, y, z] = axis.map(|c| c / n);
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        [
            [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
            [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
            [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
        ]
    }

    fn mat_vec(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|r| (0..3).map(|c| m[r][c] * v[c]).sum())
    }

    fn close(a: BlochState, b: BlochState, tol: f64) -> bool {
        (a.x - b.x).abs() < tol && (a.y - b.y).abs() < tol && (a.z - b.z).abs() < tol
    }

    fn same_rotation(a: &Rotation, b: &Rotation, tol: f64) -> bool {
        let (ma, mb) = (a.matrix(), b.matrix());
        (0..3).all(|r| (0..3).all(|c| (ma[r][c] - mb[r][c]).abs() < tol))
    }

    #[test]
    fn zero_flip_is_identity() {
        let s = BlochState::new(0.3, -0.4, 0.5);
        assert!(close(apply(&pulse(0.0, 1.234), &s), s, 1e-15));
        assert!(same_rotation(
            &z_rotation(0.0),
            &Rotation::identity(),
            1e-15
        ));
    }

    #[test]
    fn pi_about_x_flips_y_and_z() {
        let s = BlochState::new(0.2, 0.6, -0.7);
        let out = apply(&pulse(PI, 0.0), &s);
        assert!(
            close(out, BlochState::new(0.2, -0.6, 0.7), 1e-15),
            "{out:?}"
        );
    }

    #[test]
    fn quarter_turn_matches_rodrigues() {
        let out = apply(&pulse(FRAC_PI_2, 0.0), &BlochState::longitudinal());
        let expected = mat_vec(&rodrigues([1.0, 0.0, 0.0], FRAC_PI_2), [0.0, 0.0, 1.0]);
        assert!(close(
            out,
            BlochState::new(expected[0], expected[1], expected[2]),
            1e-15
        ));
        // Right-handed: z is carried to -y.
        assert!(close(out, BlochState::new(0.0, -1.0, 0.0), 1e-15));
    }

    #[test]
    fn small_flip_tips_by_sin_theta() {
        for &theta in &[1e-4, 0.01, 0.1, 0.3] {
            for k in 0..12 {
                let phi = k as f64 * 0.53;
                let out = apply(&pulse(theta, phi), &BlochState::longitudinal());
                assert!((out.x.hypot(out.y) - theta.sin()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn compose_single_and_empty() {
        let r = pulse(0.7, 0.2);
        assert_eq!(compose(&[r]).unwrap(), r);
        assert_eq!(compose(&[]), Err(Error::EmptySequence));
    }

    #[test]
    fn compose_is_application_order() {
        let a = pulse(FRAC_PI_2, 0.0);
        let b = z_rotation(FRAC_PI_2);
        let ab = compose(&[a, b]).unwrap();
        // x-pulse moves z to -y, then z-rotation moves -y to +x.
        let out = apply(&ab, &BlochState::longitudinal());
        assert!(close(out, BlochState::new(1.0, 0.0, 0.0), 1e-15), "{out:?}");
        assert!(same_rotation(&ab, &(b * a), 1e-15));
    }

    #[test]
    fn repeated_pulses_add_angles() {
        let theta = 1f64.to_radians();
        let seq = vec![pulse(theta, 0.0); 16];
        let total = compose(&seq).unwrap();
        assert!(same_rotation(&total, &pulse(16.0 * theta, 0.0), 1e-10));
        let two_pi = compose(&[pulse(PI, 0.0), pulse(PI, 0.0)]).unwrap();
        assert!(same_rotation(&two_pi, &Rotation::identity(), 1e-12));
    }

    #[test]
    fn refocusing_pulse_sign() {
        for k in 0..64 {
            let alpha = k as f64 * PI / 32.0;
            let (s, c) = alpha.sin_cos();
            let out = apply(&pulse(PI, 0.0), &BlochState::new(c, s, 0.0));
            assert!(close(out, BlochState::new(c, -s, 0.0), 1e-12));
        }
        let alpha = 0.4f64;
        let out = apply(&pulse(PI, 0.0), &BlochState::new(0.0, alpha.sin(), 0.0));
        assert!(close(out, BlochState::new(0.0, -alpha.sin(), 0.0), 1e-15));
    }

    #[test]
    fn gradient_sign() {
        for k in 0..64 {
            let alpha = k as f64 * 0.17 - 3.0;
            let out = apply(&z_rotation(alpha), &BlochState::transverse_x());
            assert!(close(
                out,
                BlochState::new(alpha.cos(), alpha.sin(), 0.0),
                1e-15
            ));
        }
        let out = apply(&z_rotation(FRAC_PI_2), &BlochState::transverse_x());
        assert!(close(out, BlochState::new(0.0, 1.0, 0.0), 1e-15));
        let back = compose(&[z_rotation(0.9), z_rotation(-0.9)]).unwrap();
        assert!(same_rotation(&back, &Rotation::identity(), 1e-15));
    }

    #[test]
    fn su2_entries_match_flip_probability() {
        // A θ pulse moves z to polar angle θ, so |b|^2 = sin^2(θ/2).
        let r = pulse(0.8, 1.1);
        let (a, b) = r.su2();
        assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((b.norm_sqr() - (0.4f64).sin().powi(2)).abs() < 1e-15);
    }

    fn arb_rotation() -> impl Strategy<Value = Rotation> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -10.0..10.0f64)
            .prop_filter("non-zero axis", |(x, y, z, _)| x * x + y * y + z * z > 1e-3)
            .prop_map(|(x, y, z, a)| Rotation::about_axis([x, y, z], a))
    }

    proptest! {
        #[test]
        fn matrix_agrees_with_rodrigues(x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64, a in -10.0..10.0f64) {
            prop_assume!(x * x + y * y + z * z > 1e-3);
            let r = Rotation::about_axis([x, y, z], a).matrix();
            let o = rodrigues([x, y, z], a);
            for i in 0..3 {
                for k in 0..3 {
                    prop_assert!((r[i][k] - o[i][k]).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn rotations_keep_triads_orthonormal(rs in proptest::collection::vec(arb_rotation(), 1..20)) {
            let r = compose(&rs).unwrap();
            let e = [BlochState::new(1.0, 0.0, 0.0), BlochState::new(0.0, 1.0, 0.0), BlochState::new(0.0, 0.0, 1.0)];
            let t: Vec<BlochState> = e.iter().map(|s| apply(&r, s)).collect();
            for i in 0..3 {
                for k in 0..3 {
                    let dot = t[i].x * t[k].x + t[i].y * t[k].y + t[i].z * t[k].z;
                    let want = if i == k { 1.0 } else { 0.0 };
                    prop_assert!((dot - want).abs() < 1e-10);
                }
            }
        }

        #[test]
        fn rotations_preserve_bloch_norm(r in arb_rotation(), th in 0.0..3.2f64, ph in 0.0..6.3f64) {
            let s = BlochState::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos());
            prop_assert!((apply(&r, &s).norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn composition_is_associative(a in arb_rotation(), b in arb_rotation(), c in arb_rotation()) {
            let left = compose(&[compose(&[a, b]).unwrap(), c]).unwrap();
            let right = compose(&[a, compose(&[b, c]).unwrap()]).unwrap();
            prop_assert!(same_rotation(&left, &right, 1e-12));
        }

        #[test]
        fn same_phase_pulses_accumulate(theta in 0.0..0.2f64, phi in 0.0..6.3f64, n in 1usize..40) {
            let total = compose(&vec![pulse(theta, phi); n]).unwrap();
            prop_assert!(same_rotation(&total, &pulse(n as f64 * theta, phi), 1e-10));
        }
    }
}
