//! Roots of unity stored as exponents.
//!
//! A scalar at level `N` is `zeta_N^exp` for the fixed primitive root
//! `zeta_N = exp(2*pi*i/N)`. All cocycle arithmetic happens on exponents, so
//! equality is exact; rendering to `Complex64` is only done at the numeric
//! boundary (characters, S-matrices, algebra constants).

use num_complex::Complex64;

/// A root of unity `zeta_N^exp` with `0 <= exp < N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ScalarExp {
    exp: i64,
    level: i64,
}

impl ScalarExp {
    pub fn new(exp: i64, level: i64) -> Self {
        assert!(level >= 1, "level must be positive");
        ScalarExp {
            exp: exp.rem_euclid(level),
            level,
        }
    }

    pub fn one(level: i64) -> Self {
        ScalarExp { exp: 0, level }
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0
    }

    pub fn mul(&self, other: &ScalarExp) -> ScalarExp {
        assert_eq!(self.level, other.level, "level mismatch");
        ScalarExp::new(self.exp + other.exp, self.level)
    }

    pub fn inv(&self) -> ScalarExp {
        ScalarExp::new(-self.exp, self.level)
    }

    pub fn pow(&self, k: i64) -> ScalarExp {
        ScalarExp::new(self.exp.wrapping_mul(k.rem_euclid(self.level)), self.level)
    }

    pub fn to_complex(&self) -> Complex64 {
        phase(self.exp, self.level)
    }
}

/// `exp(2*pi*i*k/n)` with `k` reduced mod `n` first, so equal exponents give
/// bit-identical complex values.
pub fn phase(k: i64, n: i64) -> Complex64 {
    debug_assert!(n >= 1);
    let k = k.rem_euclid(n);
    match (4 * k).checked_rem(n) {
        // exact values on the axes avoid 1e-16 noise in the common levels
        Some(0) => match (4 * k) / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            3 => Complex64::new(0.0, -1.0),
            _ => unreachable!(),
        },
        _ => {
            let t = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
            Complex64::new(t.cos(), t.sin())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_values_are_exact() {
        assert_eq!(phase(0, 4), Complex64::new(1.0, 0.0));
        assert_eq!(phase(1, 4), Complex64::new(0.0, 1.0));
        assert_eq!(phase(2, 4), Complex64::new(-1.0, 0.0));
        assert_eq!(phase(3, 4), Complex64::new(0.0, -1.0));
        assert_eq!(phase(3, 6), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn scalar_arithmetic() {
        let a = ScalarExp::new(3, 4);
        let b = ScalarExp::new(2, 4);
        assert_eq!(a.mul(&b).exp(), 1);
        assert_eq!(a.inv().exp(), 1);
        assert!(a.mul(&a.inv()).is_one());
        assert_eq!(ScalarExp::new(-1, 4).exp(), 3);
    }

    #[test]
    fn eighth_root() {
        let z = phase(1, 8);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((z.re - s).abs() < 1e-15);
        assert!((z.im - s).abs() < 1e-15);
    }
}
