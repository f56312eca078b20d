//! Rational maps: coprime numerator/denominator pairs with a monic
//! denominator.

use num_complex::Complex64;
use std::fmt;

use super::poly::Polynomial;
use super::roots::all_roots;
use crate::config::Config;
use crate::error::{Error, Result};

/// Value of a map at a point: finite, or the point at infinity (a pole).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PointValue {
    Finite(Complex64),
    Infinite,
}

impl PointValue {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            PointValue::Finite(v) => Some(v),
            PointValue::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, PointValue::Infinite)
    }

    /// Unwraps a value the caller knows is finite.
    pub fn expect_finite(self, what: &str) -> Complex64 {
        match self {
            PointValue::Finite(v) => v,
            PointValue::Infinite => panic!("unexpected pole while evaluating {what}"),
        }
    }
}

/// A rational map `num/den` in canonical form: the denominator is monic and
/// nonzero, and no denominator root lies within the cancellation radius of
/// a numerator root.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap {
    num: Polynomial,
    den: Polynomial,
}

impl RationalMap {
    /// Canonicalizes `num/den` with the default [`Config`].
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        Self::with_config(num, den, &Config::default())
    }

    /// Canonicalizes `num/den`: trims, rejects a zero denominator, enforces
    /// the degree cap, cancels numerically common roots, and scales the
    /// denominator monic.
    pub fn with_config(num: Polynomial, den: Polynomial, cfg: &Config) -> Result<Self> {
        let num = Polynomial::new(num.coeffs().to_vec(), cfg.tau_trim);
        let den = Polynomial::new(den.coeffs().to_vec(), cfg.tau_trim);
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let degree = num.degree().max(den.degree());
        if degree > cfg.degree_cap {
            return Err(Error::DegreeCap {
                degree,
                cap: cfg.degree_cap,
            });
        }
        if num.is_zero() {
            return Ok(Self {
                num: Polynomial::zero(),
                den: Polynomial::one(),
            });
        }

        let (num, den) = cancel_common_roots(num, den, cfg)?;
        let lead = den.leading();
        Ok(Self {
            num: num.scale(lead.inv()),
            den: den.scale(lead.inv()),
        })
    }

    /// The identity map `z`.
    pub fn identity() -> Self {
        Self {
            num: Polynomial::variable(),
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self {
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    /// Convenience constructor from real ascending coefficients.
    pub fn from_real(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::new(Polynomial::from_real(num), Polynomial::from_real(den))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// max(deg num, deg den).
    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree() == 0 && self.den.degree() == 0
    }

    /// Evaluates at `z`; a pole is reported when `|den(z)|` falls below
    /// `tau_pole` relative to the denominator's magnitude scale at `z`.
    pub fn evaluate(&self, z: Complex64) -> PointValue {
        self.evaluate_with(z, Config::default().tau_pole)
    }

    pub fn evaluate_with(&self, z: Complex64, tau_pole: f64) -> PointValue {
        let dv = self.den.eval(z);
        let scale = self.den.eval_scale(z).max(f64::MIN_POSITIVE);
        if dv.norm() <= tau_pole * scale {
            return PointValue::Infinite;
        }
        PointValue::Finite(self.num.eval(z) / dv)
    }

    /// Absolute rounding-noise scale of `evaluate(z)`: the magnitude that
    /// machine-epsilon perturbations of the Horner sums can reach at `z`.
    /// Probes that compare two evaluation routes must not demand agreement
    /// below this floor.
    pub fn eval_noise_floor(&self, z: Complex64) -> f64 {
        let dv = self.den.eval(z).norm();
        if dv == 0.0 {
            return f64::INFINITY;
        }
        let value = self.num.eval(z).norm() / dv;
        f64::EPSILON * (self.num.eval_scale(z) + value * self.den.eval_scale(z)) / dv
    }

    /// Evaluation extended through the point at infinity: `r(∞)` is the
    /// leading-coefficient ratio, zero, or infinity by degree comparison.
    pub fn evaluate_extended(&self, z: PointValue) -> PointValue {
        match z {
            PointValue::Finite(z) => self.evaluate(z),
            PointValue::Infinite => {
                use std::cmp::Ordering::*;
                match self.num.degree().cmp(&self.den.degree()) {
                    Greater => PointValue::Infinite,
                    Equal => PointValue::Finite(self.num.leading() / self.den.leading()),
                    Less => PointValue::Finite(Complex64::new(0.0, 0.0)),
                }
            }
        }
    }

    /// True when numerator and denominator are simultaneously real (within
    /// `tau` relative to each one's coefficient scale).
    pub fn has_real_coefficients(&self, tau: f64) -> bool {
        self.num.is_real(tau) && self.den.is_real(tau)
    }
}

/// Cancels numerator/denominator root pairs closer than `tau_gcd` (scaled).
/// When nothing cancels the original coefficient arrays are kept untouched.
///
/// Root distances alone cannot decide coprimality at high degree: a badly
/// conditioned root can move by far more than any sensible radius. A
/// candidate cancellation is therefore only accepted if the reduced map
/// still agrees with the original at probe points; a genuine common factor
/// leaves the function untouched, a false one does not.
fn cancel_common_roots(
    num: Polynomial,
    den: Polynomial,
    cfg: &Config,
) -> Result<(Polynomial, Polynomial)> {
    if num.degree() == 0 || den.degree() == 0 {
        return Ok((num, den));
    }
    let num_roots = all_roots(&num, cfg)?;
    let den_roots = all_roots(&den, cfg)?;
    let scale = num_roots
        .iter()
        .chain(den_roots.iter())
        .map(|r| r.norm())
        .fold(1.0_f64, f64::max);
    let radius = cfg.tau_gcd * scale;

    let mut keep_den = vec![true; den_roots.len()];
    let mut keep_num = vec![true; num_roots.len()];
    let mut pairs = Vec::new();
    for (i, nr) in num_roots.iter().enumerate() {
        let hit = den_roots
            .iter()
            .enumerate()
            .find(|(j, dr)| keep_den[*j] && (*nr - **dr).norm() <= radius);
        if let Some((j, dr)) = hit {
            keep_num[i] = false;
            keep_den[j] = false;
            pairs.push(*dr);
        }
    }
    if pairs.is_empty() {
        return Ok((num, den));
    }

    let kept_num: Vec<Complex64> = num_roots
        .into_iter()
        .zip(keep_num)
        .filter_map(|(r, k)| k.then_some(r))
        .collect();
    let kept_den: Vec<Complex64> = den_roots
        .into_iter()
        .zip(keep_den)
        .filter_map(|(r, k)| k.then_some(r))
        .collect();
    let reduced_num = Polynomial::from_roots(num.leading(), &kept_num);
    let reduced_den = Polynomial::from_roots(den.leading(), &kept_den);

    if cancellation_changed_the_map(&num, &den, &reduced_num, &reduced_den, &pairs, cfg) {
        return Ok((num, den));
    }
    Ok((reduced_num, reduced_den))
}

/// Compares the original and reduced maps on rings around each cancelled
/// pair — where a false cancellation distorts the function most — at radii
/// from a small multiple of the pair location's size outward.
fn cancellation_changed_the_map(
    num: &Polynomial,
    den: &Polynomial,
    reduced_num: &Polynomial,
    reduced_den: &Polynomial,
    pairs: &[Complex64],
    cfg: &Config,
) -> bool {
    for &center in pairs {
        let unit = 1.0 + center.norm();
        for rho_factor in [0.01, 0.03, 0.1, 0.5] {
            let rho = unit * rho_factor;
            for step in 0..8 {
                let z = center
                    + Complex64::from_polar(rho, std::f64::consts::TAU * step as f64 / 8.0 + 0.19);
                let dv = den.eval(z);
                let rdv = reduced_den.eval(z);
                if dv.norm() < 1e-8 * den.eval_scale(z)
                    || rdv.norm() < 1e-8 * reduced_den.eval_scale(z)
                {
                    continue;
                }
                let a = num.eval(z) / dv;
                let b = reduced_num.eval(z) / rdv;
                let floor = 1e3
                    * f64::EPSILON
                    * ((num.eval_scale(z) + a.norm() * den.eval_scale(z)) / dv.norm()
                        + (reduced_num.eval_scale(z) + b.norm() * reduced_den.eval_scale(z))
                            / rdv.norm());
                if (a - b).norm() > 0.1 * cfg.tau_pf * (1.0 + a.norm().max(b.norm())) + floor {
                    return true;
                }
            }
        }
    }
    false
}

/// `outer ∘ inner` as a rational map, validated by evaluation agreement at
/// probe points.
pub fn compose(outer: &RationalMap, inner: &RationalMap, cfg: &Config) -> Result<RationalMap> {
    let bound = outer.degree() * inner.degree().max(1);
    if bound > cfg.degree_cap {
        return Err(Error::DegreeCap {
            degree: bound,
            cap: cfg.degree_cap,
        });
    }

    let d = outer.num.degree().max(outer.den.degree());
    let u = super::dd::from_poly(&inner.num);
    let v = super::dd::from_poly(&inner.den);

    // Powers u^i v^{d-i}, shared between numerator and denominator sums.
    // The substitution mixes terms far larger than the coefficients they
    // cancel down to, so the accumulation runs in double-double precision.
    let mut u_pows = Vec::with_capacity(d + 1);
    let mut v_pows = Vec::with_capacity(d + 1);
    let mut acc_u = super::dd::one();
    let mut acc_v = super::dd::one();
    for _ in 0..=d {
        u_pows.push(acc_u.clone());
        v_pows.push(acc_v.clone());
        acc_u = super::dd::mul(&acc_u, &u);
        acc_v = super::dd::mul(&acc_v, &v);
    }

    let substitute = |p: &Polynomial| -> Polynomial {
        let mut acc: super::dd::DdPoly = Vec::new();
        for (i, &c) in p.coeffs().iter().enumerate() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let term = super::dd::mul(&u_pows[i], &v_pows[d - i]);
            super::dd::add_scaled(&mut acc, &term, c);
        }
        super::dd::to_poly(&acc, cfg.tau_trim)
    };

    let result = RationalMap::with_config(substitute(&outer.num), substitute(&outer.den), cfg)?;

    // Probe agreement: outer(inner(z)) against the symbolic result. Both
    // routes carry rounding noise — the nested route additionally through
    // the derivative of `outer` — so the comparison happens above the
    // combined noise floor.
    let outer_num_deriv = outer.num.derivative();
    let outer_den_deriv = outer.den.derivative();
    let mut rng = probe_rng(cfg, 0xC0);
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for _attempt in 0..400 {
        if checked == 20 {
            break;
        }
        let z = random_probe(&mut rng);
        let (via_maps, via_floor) = match inner.evaluate(z) {
            PointValue::Finite(w) => {
                let dv = outer.den.eval(w);
                let floor = if dv.norm() > 0.0 {
                    let deriv = (outer_num_deriv.eval(w) * dv
                        - outer.num.eval(w) * outer_den_deriv.eval(w))
                        / (dv * dv);
                    outer.eval_noise_floor(w) + deriv.norm() * inner.eval_noise_floor(z)
                } else {
                    f64::INFINITY
                };
                (outer.evaluate(w), floor)
            }
            PointValue::Infinite => (outer.evaluate_extended(PointValue::Infinite), 0.0),
        };
        let direct = result.evaluate(z);
        match (via_maps, direct) {
            (PointValue::Finite(a), PointValue::Finite(b)) => {
                let floor = 1e3 * (via_floor + result.eval_noise_floor(z));
                let rel = ((a - b).norm() - floor).max(0.0) / (1.0 + a.norm().max(b.norm()));
                worst = worst.max(rel);
                checked += 1;
            }
            // A probe too near a pole of either route is uninformative.
            _ => continue,
        }
    }
    if worst > cfg.tau_pf {
        return Err(Error::CompositionMismatch {
            residual: worst,
            threshold: cfg.tau_pf,
        });
    }
    Ok(result)
}

/// `n`-fold self-composition; `iterate(r, 0)` is the identity.
pub fn iterate(r: &RationalMap, n: usize, cfg: &Config) -> Result<RationalMap> {
    let mut acc = RationalMap::identity();
    for _ in 0..n {
        acc = compose(r, &acc, cfg)?;
    }
    Ok(acc)
}

pub(crate) fn probe_rng(cfg: &Config, salt: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed ^ salt)
}

pub(crate) fn random_probe(rng: &mut rand_chacha::ChaCha8Rng) -> Complex64 {
    use rand::Rng;
    Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
