//! Q-bit amplitudes, observation and the rotation gate.
//!
//! A Q-bit is a pair of real amplitudes `(alpha, beta)` with
//! `alpha² + beta² = 1`; `alpha²` is the probability of observing 0.
//! The rotation gate turns the pair by a signed angle whose magnitude is
//! one of eight configurable angles, chosen from the current bit, the
//! attractor's bit and whether the attractor is fitter.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::Sense;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Qbit {
    pub alpha: f64,
    pub beta: f64,
}

impl Qbit {
    pub const EQUAL: Qbit = Qbit {
        alpha: FRAC_1_SQRT_2,
        beta: FRAC_1_SQRT_2,
    };

    /// Builds a Q-bit from the angle `phi`: `(cos phi, sin phi)`.
    pub fn from_angle(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Qbit { alpha: c, beta: s }
    }

    /// Probability that observation yields 0.
    #[inline]
    pub fn p_zero(&self) -> f64 {
        self.alpha * self.alpha
    }

    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.alpha * self.alpha + self.beta * self.beta
    }

    /// Collapses to a bit: `false` (0) iff `r < alpha²`.
    #[inline]
    pub fn observe<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        let r: f64 = rng.gen();
        r >= self.p_zero()
    }

    /// Applies the rotation gate by `dtheta` radians.
    #[inline]
    pub fn rotate(&self, dtheta: f64) -> Qbit {
        let (s, c) = dtheta.sin_cos();
        Qbit {
            alpha: c * self.alpha - s * self.beta,
            beta: s * self.alpha + c * self.beta,
        }
    }
}

/// A fixed-length string of Q-bits: the genotype of one individual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QbitString {
    qbits: Vec<Qbit>,
}

impl QbitString {
    /// Every Q-bit at `(1/√2, 1/√2)`.
    pub fn init_equal(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("Q-bit string length must be at least 1"));
        }
        Ok(QbitString {
            qbits: vec![Qbit::EQUAL; n],
        })
    }

    /// Every Q-bit at `(cos phi, sin phi)` for `phi` uniform in `[0, 2π)`.
    pub fn init_random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(invalid("Q-bit string length must be at least 1"));
        }
        let qbits = (0..n)
            .map(|_| Qbit::from_angle(rng.gen_range(0.0..2.0 * PI)))
            .collect();
        Ok(QbitString { qbits })
    }

    pub fn from_qbits(qbits: Vec<Qbit>) -> Result<Self> {
        if qbits.is_empty() {
            return Err(invalid("Q-bit string length must be at least 1"));
        }
        if let Some(q) = qbits.iter().find(|q| (q.norm_sqr() - 1.0).abs() > 1e-9) {
            return Err(invalid(format!("Q-bit {q:?} is not normalized")));
        }
        Ok(QbitString { qbits })
    }

    pub fn len(&self) -> usize {
        self.qbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qbits.is_empty()
    }

    pub fn qbits(&self) -> &[Qbit] {
        &self.qbits
    }

    pub(crate) fn qbits_mut(&mut self) -> &mut [Qbit] {
        &mut self.qbits
    }

    /// Draws one binary string, a fresh uniform number per bit.
    pub fn observe<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<bool> {
        self.qbits.iter().map(|q| q.observe(rng)).collect()
    }

    /// Observes into an existing buffer of the same length.
    pub fn observe_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [bool]) {
        for (bit, q) in out.iter_mut().zip(&self.qbits) {
            *bit = q.observe(rng);
        }
    }

    /// Number of Q-bits with `alpha² < eps` or `alpha² > 1 - eps`.
    pub fn diversity(&self, eps: f64) -> Result<usize> {
        if !(eps > 0.0 && eps < 0.5) {
            return Err(invalid(format!("diversity threshold {eps} outside (0, 0.5)")));
        }
        Ok(self
            .qbits
            .iter()
            .filter(|q| {
                let p = q.p_zero();
                p < eps || p > 1.0 - eps
            })
            .count())
    }

    /// `true` when every Q-bit is within `eps` of a basis state.
    pub fn is_converged(&self, eps: f64) -> Result<bool> {
        Ok(self.diversity(eps)? == self.len())
    }
}

/// The eight rotation magnitudes, stored in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationPolicy {
    theta: [f64; 8],
    pub sense: Sense,
}

/// One row group of the rotation lookup table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RotationCase {
    /// 1-based angle index.
    pub index: usize,
    /// Basis state the rotation moves probability towards.
    pub target_one: bool,
}

impl RotationCase {
    /// Looks up the table row for current bit `x`, attractor bit `b` and
    /// whether the attractor is strictly fitter.
    ///
    /// Rows run (x, b, better) = (0,0,T), (0,0,F), (0,1,T), … (1,1,F).
    /// When the attractor is fitter the Q-bit moves towards its bit,
    /// otherwise towards the individual's own bit.
    pub fn lookup(x: bool, b: bool, better: bool) -> RotationCase {
        let index = 1 + 4 * x as usize + 2 * b as usize + (!better) as usize;
        RotationCase {
            index,
            target_one: if better { b } else { x },
        }
    }
}

impl RotationPolicy {
    /// Builds a policy from magnitudes given as multiples of π.
    pub fn from_pi_multiples(theta_pi: [f64; 8], sense: Sense) -> Result<Self> {
        if let Some(t) = theta_pi.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
            return Err(invalid(format!("rotation magnitude {t}π must be finite and non-negative")));
        }
        Ok(RotationPolicy {
            theta: theta_pi.map(|t| t * PI),
            sense,
        })
    }

    /// Magnitudes in radians.
    pub fn radians(&self) -> [f64; 8] {
        self.theta
    }

    /// Magnitudes as multiples of π.
    pub fn pi_multiples(&self) -> [f64; 8] {
        self.theta.map(|t| t / PI)
    }

    /// Signed rotation for one Q-bit.
    ///
    /// Within the open quadrants the sign is `+` when the target is |1⟩
    /// and `alpha·beta > 0`, or when the target is |0⟩ and
    /// `alpha·beta < 0`. On an axis the sign is a fair coin flip.
    pub fn delta_theta<R: Rng + ?Sized>(
        &self,
        x: bool,
        b: bool,
        better: bool,
        q: &Qbit,
        rng: &mut R,
    ) -> f64 {
        let case = RotationCase::lookup(x, b, better);
        let magnitude = self.theta[case.index - 1];
        if magnitude == 0.0 {
            return 0.0;
        }
        let product = q.alpha * q.beta;
        let sign = if product == 0.0 {
            if rng.gen::<bool>() {
                1.0
            } else {
                -1.0
            }
        } else if (product > 0.0) == case.target_one {
            1.0
        } else {
            -1.0
        };
        sign * magnitude
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;
    use proptest::prelude::*;
    use rand::Rng;

    fn policy() -> RotationPolicy {
        RotationPolicy::from_pi_multiples(
            [0.001, 0.002, 0.003, 0.004, 0.005, 0.006, 0.007, 0.008],
            Sense::Maximize,
        )
        .unwrap()
    }

    #[test]
    fn init_equal_values() {
        let q = QbitString::init_equal(4).unwrap();
        assert_eq!(q.len(), 4);
        for b in q.qbits() {
            assert!((b.alpha - 0.7071067811865476).abs() < 1e-15);
            assert!((b.beta - 0.7071067811865476).abs() < 1e-15);
        }
        let one = QbitString::init_equal(1).unwrap();
        assert!((one.qbits()[0].p_zero() - 0.5).abs() < 1e-15);
        assert!(QbitString::init_equal(0).is_err());
    }

    #[test]
    fn init_random_is_normalized_and_seeded() {
        let a = QbitString::init_random(500, &mut rng_from_seed(9)).unwrap();
        let b = QbitString::init_random(500, &mut rng_from_seed(9)).unwrap();
        assert_eq!(a, b);
        for q in a.qbits() {
            assert!((q.norm_sqr() - 1.0).abs() < 1e-12);
            assert!(q.alpha.abs() <= 1.0 && q.beta.abs() <= 1.0);
        }
        assert!(QbitString::init_random(0, &mut rng_from_seed(9)).is_err());
    }

    #[test]
    fn init_random_mean_alpha_sqr() {
        // E[cos² φ] = 1/2 for φ uniform on [0, 2π).
        let q = QbitString::init_random(100_000, &mut rng_from_seed(3)).unwrap();
        let mean = q.qbits().iter().map(Qbit::p_zero).sum::<f64>() / 1e5;
        assert!((0.49..=0.51).contains(&mean), "mean alpha² {mean}");
    }

    #[test]
    fn observe_basis_states() {
        let mut rng = rng_from_seed(1);
        let zero = Qbit { alpha: 1.0, beta: 0.0 };
        let one = Qbit { alpha: 0.0, beta: 1.0 };
        for _ in 0..10_000 {
            assert!(!zero.observe(&mut rng));
            assert!(one.observe(&mut rng));
        }
    }

    #[test]
    fn observe_quarter_probability() {
        let mut rng = rng_from_seed(2);
        let q = Qbit { alpha: 0.5, beta: 0.75f64.sqrt() };
        let zeros = (0..1_000_000).filter(|_| !q.observe(&mut rng)).count();
        let p = zeros as f64 / 1e6;
        assert!((p - 0.25).abs() < 0.01, "P(0) = {p}");
    }

    #[test]
    fn equal_string_ones_fraction() {
        // 1000 bits × 1000 draws; σ of the fraction is 0.5/1000 = 5e-4.
        let q = QbitString::init_equal(1000).unwrap();
        let mut rng = rng_from_seed(4);
        let mut ones = 0usize;
        let mut buf = vec![false; 1000];
        for _ in 0..1000 {
            q.observe_into(&mut rng, &mut buf);
            ones += buf.iter().filter(|b| **b).count();
        }
        let frac = ones as f64 / 1e6;
        assert!((frac - 0.5).abs() < 0.002, "ones fraction {frac}");
    }

    #[test]
    fn rotate_examples() {
        let q = Qbit { alpha: 0.6, beta: 0.8 };
        assert_eq!(q.rotate(0.0), q);
        let r = Qbit { alpha: 1.0, beta: 0.0 }.rotate(PI / 2.0);
        assert!(r.alpha.abs() < 1e-12 && (r.beta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lookup_table_rows() {
        let expect = [
            (false, false, true, 1, false),
            (false, false, false, 2, false),
            (false, true, true, 3, true),
            (false, true, false, 4, false),
            (true, false, true, 5, false),
            (true, false, false, 6, true),
            (true, true, true, 7, true),
            (true, true, false, 8, true),
        ];
        for (x, b, better, index, target_one) in expect {
            assert_eq!(
                RotationCase::lookup(x, b, better),
                RotationCase { index, target_one }
            );
        }
    }

    #[test]
    fn table_signs() {
        let p = policy();
        let t = p.radians();
        let mut rng = rng_from_seed(0);
        let pp = Qbit { alpha: 0.6, beta: 0.8 };
        let mp = Qbit { alpha: -0.6, beta: 0.8 };
        let mm = Qbit { alpha: -0.6, beta: -0.8 };
        let pm = Qbit { alpha: 0.6, beta: -0.8 };
        // x=0, b=1, better: +θ3 in the first quadrant.
        assert_eq!(p.delta_theta(false, true, true, &pp, &mut rng), t[2]);
        // x=1, b=0, better: −θ5 in the first quadrant.
        assert_eq!(p.delta_theta(true, false, true, &pp, &mut rng), -t[4]);
        // x=0, b=0, better: +θ1 in the second quadrant.
        assert_eq!(p.delta_theta(false, false, true, &mp, &mut rng), t[0]);

        // Full sign table, quadrant order (+,+), (−,+), (−,−), (+,−).
        let toward_zero = [-1.0, 1.0, -1.0, 1.0];
        let toward_one = [1.0, -1.0, 1.0, -1.0];
        let rows: [(bool, bool, bool, [f64; 4]); 8] = [
            (false, false, true, toward_zero),
            (false, false, false, toward_zero),
            (false, true, true, toward_one),
            (false, true, false, toward_zero),
            (true, false, true, toward_zero),
            (true, false, false, toward_one),
            (true, true, true, toward_one),
            (true, true, false, toward_one),
        ];
        for (k, (x, b, better, signs)) in rows.into_iter().enumerate() {
            for (q, s) in [pp, mp, mm, pm].iter().zip(signs) {
                assert_eq!(p.delta_theta(x, b, better, q, &mut rng), s * t[k], "row {}", k + 1);
            }
        }
    }

    #[test]
    fn axis_sign_is_random() {
        let p = policy();
        let mut rng = rng_from_seed(11);
        let q = Qbit { alpha: 1.0, beta: 0.0 };
        let draws: Vec<f64> = (0..2000)
            .map(|_| p.delta_theta(false, true, true, &q, &mut rng))
            .collect();
        let plus = draws.iter().filter(|d| **d > 0.0).count();
        assert!(draws.iter().all(|d| d.abs() == p.radians()[2]));
        assert!((900..1100).contains(&plus), "{plus} positive signs");
    }

    #[test]
    fn diversity_counts() {
        assert_eq!(QbitString::init_equal(10).unwrap().diversity(0.05).unwrap(), 0);
        let ones = QbitString::from_qbits(vec![Qbit { alpha: 1.0, beta: 0.0 }; 7]).unwrap();
        assert_eq!(ones.diversity(0.3).unwrap(), 7);
        assert!(ones.is_converged(0.01).unwrap());

        let near = Qbit { alpha: 0.999f64.sqrt(), beta: 0.001f64.sqrt() };
        let mut v = vec![Qbit::EQUAL; 8];
        v[1] = near;
        v[4] = near;
        v[6] = near;
        let mixed = QbitString::from_qbits(v).unwrap();
        assert_eq!(mixed.diversity(0.01).unwrap(), 3);
        assert!(mixed.diversity(0.0).is_err());
        assert!(mixed.diversity(0.5).is_err());
    }

    #[test]
    fn chained_rotation_drift() {
        let mut q = Qbit { alpha: 0.6, beta: 0.8 };
        let mut rng = rng_from_seed(5);
        for _ in 0..1_000_000 {
            q = q.rotate(rng.gen_range(-PI..PI));
        }
        assert!((q.norm_sqr() - 1.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn rotation_is_unitary(phi in 0.0..2.0 * PI, d in -10.0..10.0f64) {
            let q = Qbit::from_angle(phi).rotate(d);
            prop_assert!((q.norm_sqr() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn rotations_compose(phi in 0.0..2.0 * PI, a in -PI..PI, b in -PI..PI) {
            let q = Qbit::from_angle(phi);
            let two = q.rotate(a).rotate(b);
            let one = q.rotate(a + b);
            prop_assert!((two.alpha - one.alpha).abs() < 1e-9);
            prop_assert!((two.beta - one.beta).abs() < 1e-9);
        }

        // Moving towards a basis state never lowers its probability as long
        // as the step does not overshoot past that state's axis, i.e. the
        // step is at most twice the angular distance to the axis.
        #[test]
        fn rotation_moves_towards_target(
            phi in 0.0..2.0 * PI,
            x in any::<bool>(),
            b in any::<bool>(),
            better in any::<bool>(),
            mag in 0.0..0.25f64,
        ) {
            let q = Qbit::from_angle(phi);
            prop_assume!(q.alpha * q.beta != 0.0);
            let p = RotationPolicy::from_pi_multiples([mag; 8], Sense::Maximize).unwrap();
            let case = RotationCase::lookup(x, b, better);
            let target_axis_gap = if case.target_one {
                q.alpha.abs().atan2(q.beta.abs())
            } else {
                q.beta.abs().atan2(q.alpha.abs())
            };
            let d = p.delta_theta(x, b, better, &q, &mut rng_from_seed(0));
            prop_assume!(d.abs() <= 2.0 * target_axis_gap);
            let r = q.rotate(d);
            if case.target_one {
                prop_assert!(r.beta * r.beta >= q.beta * q.beta - 1e-12);
            } else {
                prop_assert!(r.alpha * r.alpha >= q.alpha * q.alpha - 1e-12);
            }
        }

        #[test]
        fn delta_theta_depends_on_quadrant_only(
            phi1 in 0.01..(PI / 2.0 - 0.01),
            phi2 in 0.01..(PI / 2.0 - 0.01),
            quadrant in 0usize..4,
            x in any::<bool>(),
            b in any::<bool>(),
            better in any::<bool>(),
        ) {
            let p = policy();
            let shift = quadrant as f64 * PI / 2.0;
            let mut rng = rng_from_seed(1);
            let d1 = p.delta_theta(x, b, better, &Qbit::from_angle(phi1 + shift), &mut rng);
            let d2 = p.delta_theta(x, b, better, &Qbit::from_angle(phi2 + shift), &mut rng);
            prop_assert_eq!(d1, d2);
        }
    }
}
