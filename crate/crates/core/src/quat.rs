//! Commutative (Segre) quaternion scalars.
//!
//! The imaginary units obey `i² = k² = -1`, `j² = +1`, `ij = ji = k`,
//! `jk = kj = i` and `ki = ik = -j`. Multiplication is commutative and
//! associative, but the ring has zero divisors (`(1 + j)(1 - j) = 0`), so the
//! magnitude is not multiplicative and there is no general inverse.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// One commutative quaternion `w + x i + y j + z k`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CQuat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CQuat {
    pub const ZERO: CQuat = CQuat::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: CQuat = CQuat::new(1.0, 0.0, 0.0, 0.0);
    pub const I: CQuat = CQuat::new(0.0, 1.0, 0.0, 0.0);
    pub const J: CQuat = CQuat::new(0.0, 0.0, 1.0, 0.0);
    pub const K: CQuat = CQuat::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        CQuat { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        CQuat::new(w, 0.0, 0.0, 0.0)
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        CQuat::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Real part.
    pub fn re(self) -> f64 {
        self.w
    }

    /// First-kind principal conjugate `w - x i + y j - z k`.
    pub fn conj(self) -> Self {
        CQuat::new(self.w, -self.x, self.y, -self.z)
    }

    /// Sum of squared components, equal to `Re(q * conj(q))`.
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn magnitude(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        CQuat::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn is_zero(self) -> bool {
        self == CQuat::ZERO
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(self, other: CQuat) -> f64 {
        let d = self - other;
        d.w.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
    }
}

impl Add for CQuat {
    type Output = CQuat;
    fn add(self, o: CQuat) -> CQuat {
        CQuat::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for CQuat {
    type Output = CQuat;
    fn sub(self, o: CQuat) -> CQuat {
        CQuat::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for CQuat {
    type Output = CQuat;
    fn neg(self) -> CQuat {
        CQuat::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for CQuat {
    type Output = CQuat;
    fn mul(self, q: CQuat) -> CQuat {
        let p = self;
        CQuat::new(
            p.w * q.w - p.x * q.x + p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z + p.z * q.y,
            p.w * q.y + p.y * q.w - p.x * q.z - p.z * q.x,
            p.w * q.z + p.z * q.w + p.x * q.y + p.y * q.x,
        )
    }
}

impl Mul<f64> for CQuat {
    type Output = CQuat;
    fn mul(self, s: f64) -> CQuat {
        self.scale(s)
    }
}

impl Mul<CQuat> for f64 {
    type Output = CQuat;
    fn mul(self, q: CQuat) -> CQuat {
        q.scale(self)
    }
}

impl AddAssign for CQuat {
    fn add_assign(&mut self, o: CQuat) {
        *self = *self + o;
    }
}

impl SubAssign for CQuat {
    fn sub_assign(&mut self, o: CQuat) {
        *self = *self - o;
    }
}

impl MulAssign for CQuat {
    fn mul_assign(&mut self, o: CQuat) {
        *self = *self * o;
    }
}

impl Sum for CQuat {
    fn sum<I: Iterator<Item = CQuat>>(iter: I) -> CQuat {
        iter.fold(CQuat::ZERO, Add::add)
    }
}

impl From<f64> for CQuat {
    fn from(w: f64) -> Self {
        CQuat::real(w)
    }
}

/// Renders as `a + b i + c j + d k`, always with all four components in
/// that order. Negative components keep their sign (`1 + -2 i + 0 j + 0 k`).
impl fmt::Display for CQuat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {} i + {} j + {} k", self.w, self.x, self.y, self.z)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse commutative quaternion from {0:?}")]
pub struct ParseCQuatError(pub String);

impl FromStr for CQuat {
    type Err = ParseCQuatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseCQuatError(s.to_string());
        let toks: Vec<&str> = s.split_whitespace().collect();
        // a + b i + c j + d k
        if toks.len() != 10 {
            return Err(err());
        }
        let units = [(2, 4, "i"), (5, 7, "j"), (8, 10, "k")];
        let mut c = [0.0; 4];
        c[0] = toks[0].parse().map_err(|_| err())?;
        for (n, &(start, _, unit)) in units.iter().enumerate() {
            if toks[start - 1] != "+" || toks[start + 1] != unit {
                return Err(err());
            }
            c[n + 1] = toks[start].parse().map_err(|_| err())?;
        }
        Ok(CQuat::from_array(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ONE: CQuat = CQuat::ONE;
    const I: CQuat = CQuat::I;
    const J: CQuat = CQuat::J;
    const K: CQuat = CQuat::K;

    #[test]
    fn unit_table() {
        assert_eq!(I * J, K);
        assert_eq!(J * I, K);
        assert_eq!(J * K, I);
        assert_eq!(K * J, I);
        assert_eq!(K * I, -J);
        assert_eq!(I * K, -J);
        assert_eq!(I * I, -ONE);
        assert_eq!(K * K, -ONE);
        assert_eq!(J * J, ONE);
        assert_eq!(I * J * K, -ONE);
    }

    #[test]
    fn zero_divisor() {
        let p = ONE + J;
        let q = ONE - J;
        assert_eq!(p * q, CQuat::ZERO);
        assert_eq!((p * q).magnitude(), 0.0);
        assert!((p.magnitude() * q.magnitude() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn one_plus_i_times_one_minus_i() {
        assert_eq!((ONE + I) * (ONE - I), CQuat::real(2.0));
    }

    #[test]
    fn conjugation() {
        let q = CQuat::new(1.0, 1.0, 1.0, 1.0);
        assert_eq!(q.conj(), CQuat::new(1.0, -1.0, 1.0, -1.0));
        assert_eq!((q * q.conj()).re(), 4.0);
        assert_eq!(q.magnitude(), 2.0);
        assert_eq!(CQuat::ZERO.magnitude(), 0.0);
    }

    #[test]
    fn display_and_parse() {
        let q = CQuat::new(1.5, -2.0, 0.0, 3.25);
        let s = q.to_string();
        assert_eq!(s, "1.5 + -2 i + 0 j + 3.25 k");
        assert_eq!(s.parse::<CQuat>().unwrap(), q);
        assert!("1 + 2 i + 3 j".parse::<CQuat>().is_err());
        assert!("1 - 2 i + 3 j + 4 k".parse::<CQuat>().is_err());
    }

    fn cq() -> impl Strategy<Value = CQuat> {
        prop::array::uniform4(-1.0f64..1.0).prop_map(CQuat::from_array)
    }

    proptest! {
        #[test]
        fn commutative(p in cq(), q in cq()) {
            prop_assert!((p * q).max_abs_diff(q * p) <= 1e-12);
        }

        #[test]
        fn associative(p in cq(), q in cq(), r in cq()) {
            prop_assert!(((p * q) * r).max_abs_diff(p * (q * r)) <= 1e-10);
        }

        #[test]
        fn distributive(p in cq(), q in cq(), r in cq()) {
            prop_assert!((p * (q + r)).max_abs_diff(p * q + p * r) <= 1e-12);
        }

        #[test]
        fn conj_involution_and_modulus(q in cq()) {
            prop_assert_eq!(q.conj().conj(), q);
            prop_assert!(((q * q.conj()).re() - q.magnitude().powi(2)).abs() <= 1e-12);
        }

        #[test]
        fn display_round_trip(q in cq()) {
            prop_assert_eq!(q.to_string().parse::<CQuat>().unwrap(), q);
        }
    }
}
