//! Dense complex polynomials with ascending coefficient order.

use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A polynomial with complex coefficients, stored in ascending degree order.
///
/// Invariants: the coefficient list is never empty, and the leading
/// coefficient is nonzero unless this is the zero polynomial `[0]`.
/// Construction trims trailing coefficients whose magnitude is below
/// `tau_trim` relative to the largest coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, trimming trailing
    /// near-zero coefficients at relative tolerance `tau_trim`.
    pub fn new(coeffs: Vec<Complex64>, tau_trim: f64) -> Self {
        let mut coeffs = coeffs;
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let threshold = tau_trim * scale;
        while coeffs.len() > 1 {
            let last = coeffs.last().unwrap().norm();
            if last <= threshold {
                coeffs.pop();
            } else {
                break;
            }
        }
        if coeffs.is_empty() || (coeffs.len() == 1 && coeffs[0].norm() <= threshold) {
            coeffs = vec![Complex64::new(0.0, 0.0)];
        }
        Self { coeffs }
    }

    /// Coefficients taken as exact; only literal trailing zeros are trimmed.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        Self::new(coeffs, 0.0)
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0)],
        }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// The monomial `z`.
    pub fn variable() -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }

    /// Monic polynomial `lead · Π (z − root)`, multiplied out.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut coeffs = vec![lead];
        for &root in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k] -= c * root;
                next[k + 1] += c;
            }
            coeffs = next;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(1.0, 0.0)
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// `Σ |a_k| |z|^k` — the natural magnitude scale of `eval(z)`, used for
    /// relative pole/zero decisions.
    pub fn eval_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * r + c.norm();
        }
        acc
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero();
        }
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Quotient and remainder of `self / den`. The divisor must be nonzero.
    pub fn divmod(&self, den: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!den.is_zero(), "division by the zero polynomial");
        if self.degree() < den.degree() || self.is_zero() {
            return (Polynomial::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dn = den.degree();
        let lead = den.leading();
        let qlen = rem.len() - dn;
        let mut quot = vec![Complex64::new(0.0, 0.0); qlen];
        for k in (0..qlen).rev() {
            let q = rem[k + dn] / lead;
            quot[k] = q;
            for j in 0..=dn {
                rem[k + j] -= q * den.coeffs[j];
            }
        }
        rem.truncate(dn.max(1));
        // Remainder entries are differences of like-sized terms; trim the
        // rounding dust left where exact cancellation occurred.
        let scale = self.max_coeff_norm().max(den.max_coeff_norm());
        let mut rem_poly = Polynomial::from_coeffs(rem);
        if rem_poly.max_coeff_norm() <= 1e-13 * scale {
            rem_poly = Polynomial::zero();
        }
        (Polynomial::from_coeffs(quot), rem_poly)
    }

    /// Coefficients of `p(center + s)` in powers of `s`, up to `order`
    /// (inclusive), by repeated synthetic division.
    pub fn taylor_at(&self, center: Complex64, order: usize) -> Vec<Complex64> {
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(order + 1);
        for _ in 0..=order {
            if work.is_empty() {
                out.push(Complex64::new(0.0, 0.0));
                continue;
            }
            // Divide by (s) after shifting: Horner gives p(center) as the
            // remainder and the quotient in place.
            let mut rem = Complex64::new(0.0, 0.0);
            for c in work.iter_mut().rev() {
                let v = *c + rem * center;
                rem = v;
                *c = v;
            }
            // rem = value; quotient coefficients are work[1..] shifted.
            out.push(rem);
            work.remove(0);
        }
        out
    }

    /// `z^deg · conj(p(1/conj z))` — the reversed conjugate polynomial.
    pub fn reversed_conjugate(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    /// True when every coefficient is real within `tau` relative to the
    /// coefficient scale.
    pub fn is_real(&self, tau: f64) -> bool {
        let scale = self.max_coeff_norm();
        if scale == 0.0 {
            return true;
        }
        self.coeffs.iter().all(|c| c.im.abs() <= tau * scale)
    }

    /// Drops imaginary parts; callers should check [`Polynomial::is_real`]
    /// first.
    pub fn realified(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| Complex64::new(c.re, 0.0))
                .collect(),
        )
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.coeff(k) + rhs.coeff(k);
        }
        Polynomial::from_coeffs(out)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.coeff(k) - rhs.coeff(k);
        }
        Polynomial::from_coeffs(out)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|&c| -c).collect())
    }
}

fn fmt_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else if c.im < 0.0 {
        format!("({}{}i)", c.re, c.im)
    } else {
        format!("({}+{}i)", c.re, c.im)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let coeff = fmt_coeff(c);
            let part = match k {
                0 => coeff,
                1 if c == Complex64::new(1.0, 0.0) => "z".to_string(),
                1 => format!("{coeff}*z"),
                _ if c == Complex64::new(1.0, 0.0) => format!("z^{k}"),
                _ => format!("{coeff}*z^{k}"),
            };
            parts.push(part);
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trim_drops_trailing_noise_relative_to_scale() {
        let p = Polynomial::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-15, 0.0)], 1e-12);
        assert_eq!(p.degree(), 1);
        // A genuinely small but significant lead survives when scale is small.
        let q = Polynomial::new(vec![c(1e-15, 0.0), c(1e-14, 0.0)], 1e-12);
        assert_eq!(q.degree(), 1);
    }

    #[test]
    fn zero_polynomial_has_degree_zero_and_is_zero() {
        let p = Polynomial::new(vec![c(0.0, 0.0), c(0.0, 0.0)], 1e-12);
        assert!(p.is_zero());
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn eval_matches_expanded_form() {
        // (z-1)^2 (z+2) = z^3 - 3z + 2
        let p = Polynomial::from_real(&[2.0, -3.0, 0.0, 1.0]);
        let z = c(0.3, -0.7);
        let direct = (z - 1.0).powi(2) * (z + 2.0);
        assert!((p.eval(z) - direct).norm() < 1e-12);
    }

    #[test]
    fn divmod_reconstructs() {
        let num = Polynomial::from_real(&[1.0, 0.0, 1.0]); // z^2 + 1
        let den = Polynomial::from_real(&[0.0, 1.0]); // z
        let (q, r) = num.divmod(&den);
        assert_eq!(q, Polynomial::from_real(&[0.0, 1.0]));
        assert_eq!(r, Polynomial::from_real(&[1.0]));
        let back = &(&q * &den) + &r;
        assert_eq!(back, num);
    }

    #[test]
    fn taylor_shift_agrees_with_direct_evaluation() {
        let p = Polynomial::from_real(&[2.0, -3.0, 0.0, 1.0]);
        let center = c(1.5, 0.5);
        let t = p.taylor_at(center, 3);
        let s = c(0.1, -0.2);
        let shifted: Complex64 = t
            .iter()
            .rev()
            .fold(c(0.0, 0.0), |acc, &coef| acc * s + coef);
        assert!((shifted - p.eval(center + s)).norm() < 1e-12);
    }

    #[test]
    fn from_roots_expands() {
        let p = Polynomial::from_roots(c(1.0, 0.0), &[c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)]);
        let expected = Polynomial::from_real(&[2.0, -3.0, 0.0, 1.0]);
        for k in 0..=3 {
            assert!((p.coeff(k) - expected.coeff(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn reversed_conjugate_on_circle_conjugates_values() {
        let p = Polynomial::from_coeffs(vec![c(-0.5, 0.2), c(1.0, 0.0)]);
        let sharp = p.reversed_conjugate();
        let z = Complex64::from_polar(1.0, 0.83);
        // z^deg · conj(p(1/conj z)) at |z| = 1 equals z^deg · conj(p(z)).
        let lhs = sharp.eval(z);
        let rhs = z.powu(p.degree() as u32) * p.eval(z).conj();
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
