//! Disc ↔ half-plane transfer and innerness tests.
//!
//! The Möbius map `J(z) = i(1−z)/(1+z)` carries the unit disc onto the
//! upper half-plane and the unit circle onto `ℝ ∪ {∞}`. A half-plane
//! symbol `φ` transfers to the disc symbol `Φ = J⁻¹ ∘ φ ∘ J`, and the
//! composition operator with symbol `φ` transfers to the weighted
//! composition operator with weight `((1+Φ(z))/(1+z))^{2/p}`. The unitary
//! realizing the transfer is fixed here as
//! `(Vf)(z) = (4π)^{1/p} (1+z)^{−2/p} f(J(z))`: the substitution
//! `t = tan(θ/2)` sends normalized arc length on the circle to
//! `dt/(π(1+t²))`-free Lebesgue measure in exactly the way that makes `V`
//! preserve boundary `L^p` norms.

mod outer;

pub use outer::{build_outer, ArcModulus, BoundaryArc, OuterFunctionSpec};

use num_complex::Complex64;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::ratfunc::{compose, PointValue, Polynomial, RationalMap};

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `J(z) = i(1−z)/(1+z)`, disc → upper half-plane. `J(−1) = ∞`.
pub fn cayley(z: Complex64) -> PointValue {
    let den = c64(1.0, 0.0) + z;
    if den.norm() < 1e-15 {
        return PointValue::Infinite;
    }
    PointValue::Finite(c64(0.0, 1.0) * (c64(1.0, 0.0) - z) / den)
}

/// `J⁻¹(w) = (i−w)/(i+w)`, upper half-plane → disc. `J⁻¹(−i) = ∞`.
pub fn cayley_inverse(w: Complex64) -> PointValue {
    let den = c64(0.0, 1.0) + w;
    if den.norm() < 1e-15 {
        return PointValue::Infinite;
    }
    PointValue::Finite((c64(0.0, 1.0) - w) / den)
}

/// `J` as a rational map, for symbolic composition.
pub fn cayley_map() -> RationalMap {
    // i(1-z)/(1+z)
    RationalMap::new(
        Polynomial::from_coeffs(vec![c64(0.0, 1.0), c64(0.0, -1.0)]),
        Polynomial::from_real(&[1.0, 1.0]),
    )
    .expect("fixed Möbius map is valid")
}

/// `J⁻¹` as a rational map.
pub fn cayley_inverse_map() -> RationalMap {
    // (i-w)/(i+w)
    RationalMap::new(
        Polynomial::from_coeffs(vec![c64(0.0, 1.0), c64(-1.0, 0.0)]),
        Polynomial::from_coeffs(vec![c64(0.0, 1.0), c64(1.0, 0.0)]),
    )
    .expect("fixed Möbius map is valid")
}

/// Transfers a half-plane symbol to the disc: `Φ = J⁻¹ ∘ φ ∘ J`.
pub fn conjugate_symbol(phi: &RationalMap, cfg: &Config) -> Result<RationalMap> {
    let inner = compose(phi, &cayley_map(), cfg)?;
    compose(&cayley_inverse_map(), &inner, cfg)
}

/// Principal-branch complex power with the branch cut resolved from above:
/// a negative real base takes argument `+π`, matching the limit from the
/// upper half-plane.
pub fn principal_power(base: Complex64, exponent: f64) -> Complex64 {
    if base.norm() == 0.0 {
        return c64(0.0, 0.0);
    }
    let mut arg = base.arg();
    if base.im == 0.0 && base.re < 0.0 {
        arg = std::f64::consts::PI;
    }
    Complex64::from_polar(base.norm().powf(exponent), exponent * arg)
}

/// The transfer weight `((1+Φ(z))/(1+z))^{2/p}` at `z` in the closed disc.
/// `z = −1` and poles of `Φ` report the infinite marker.
pub fn weight(phi_disc: &RationalMap, p: f64, z: Complex64) -> PointValue {
    let den = c64(1.0, 0.0) + z;
    if den.norm() < 1e-15 {
        return PointValue::Infinite;
    }
    match phi_disc.evaluate(z) {
        PointValue::Infinite => PointValue::Infinite,
        PointValue::Finite(w) => {
            let ratio = (c64(1.0, 0.0) + w) / den;
            PointValue::Finite(principal_power(ratio, 2.0 / p))
        }
    }
}

/// The boundary-norm-preserving transfer `H^p(ℂ⁺) → H^p(𝔻)`:
/// `(Vf)(z) = (4π)^{1/p} (1+z)^{−2/p} f(J(z))`.
///
/// The returned closure yields NaN at `z = −1` (the image point is ∞);
/// quadrature grids never place a node there.
pub fn transfer_isometry<'a, F>(f: F, p: f64) -> impl Fn(Complex64) -> Complex64 + 'a
where
    F: Fn(Complex64) -> Complex64 + 'a,
{
    let front = (4.0 * std::f64::consts::PI).powf(1.0 / p);
    move |z: Complex64| match cayley(z) {
        PointValue::Finite(w) => front * principal_power(c64(1.0, 0.0) + z, -2.0 / p) * f(w),
        PointValue::Infinite => c64(f64::NAN, f64::NAN),
    }
}

/// The weighted composition operator `g ↦ weight·(g ∘ Φ)` on the disc.
pub fn weighted_composition<'a, G>(
    phi_disc: &'a RationalMap,
    p: f64,
    g: G,
) -> impl Fn(Complex64) -> Complex64 + 'a
where
    G: Fn(Complex64) -> Complex64 + 'a,
{
    move |z: Complex64| {
        let w = match weight(phi_disc, p, z) {
            PointValue::Finite(w) => w,
            PointValue::Infinite => return c64(f64::NAN, f64::NAN),
        };
        match phi_disc.evaluate(z) {
            PointValue::Finite(target) => w * g(target),
            PointValue::Infinite => c64(f64::NAN, f64::NAN),
        }
    }
}

/// A disc symbol paired with the Hardy exponent it acts on. Construction
/// verifies `Φ(𝔻) ⊆ 𝔻` by boundary-modulus sampling plus pole location.
#[derive(Clone, Debug)]
pub struct WeightedSymbol {
    pub symbol: RationalMap,
    pub p: f64,
}

impl WeightedSymbol {
    pub fn new(symbol: RationalMap, p: f64, cfg: &Config) -> Result<Self> {
        if !(1.0..f64::INFINITY).contains(&p) {
            return Err(Error::Precondition {
                what: format!("exponent p = {p} outside [1, ∞)"),
            });
        }
        // No pole inside or on the unit circle.
        if symbol.den().degree() > 0 {
            let poles = crate::ratfunc::all_roots(symbol.den(), cfg)?;
            if let Some(bad) = poles.iter().find(|g| g.norm() <= 1.0 + cfg.tau_cluster) {
                return Err(Error::Precondition {
                    what: format!("disc symbol has a pole at {bad} inside the closed disc"),
                });
            }
        }
        // Boundary modulus at most 1 (up to tolerance); the maximum
        // principle then bounds the interior.
        for k in 0..512 {
            let z = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 512.0);
            if let PointValue::Finite(v) = symbol.evaluate(z) {
                if v.norm() > 1.0 + 1e3 * cfg.tau_boundary {
                    return Err(Error::Precondition {
                        what: format!(
                            "disc symbol exceeds the unit circle: |Φ({z})| = {}",
                            v.norm()
                        ),
                    });
                }
            }
        }
        Ok(Self { symbol, p })
    }
}

/// Outcome of the half-plane innerness test.
#[derive(Clone, Debug)]
pub enum InnerTest {
    /// Inner: the canonical (monic-denominator) form has real coefficients;
    /// the realified copy is returned.
    Inner { realified: RationalMap },
    /// Not inner: a real probe point where the map leaves the real line.
    NotInner { probe: f64, imag: f64 },
}

impl InnerTest {
    pub fn is_inner(&self) -> bool {
        matches!(self, InnerTest::Inner { .. })
    }
}

/// Tests whether `r` maps `ℝ` into `ℝ ∪ {∞}`. For a rational map in
/// canonical monic-denominator form this holds exactly when both
/// coefficient lists are real after the unimodular common factor is
/// removed — and the monic normalization has already removed it, so the
/// test is a relative-tolerance realness check on the coefficients.
pub fn is_inner_halfplane(r: &RationalMap, tau: f64) -> InnerTest {
    if r.has_real_coefficients(tau) {
        return InnerTest::Inner {
            realified: RationalMap::new(r.num().realified(), r.den().realified())
                .expect("realified copy of a valid map stays valid"),
        };
    }
    // Hunt for a real probe where Im r(x) is visibly nonzero.
    let mut best: Option<(f64, f64)> = None;
    for k in 0..=400 {
        let x = -10.0 + 20.0 * k as f64 / 400.0;
        if let PointValue::Finite(v) = r.evaluate(c64(x, 0.0)) {
            let im = v.im;
            if best.is_none_or(|(_, b)| im.abs() > b.abs()) {
                best = Some((x, im));
            }
        }
    }
    let (probe, imag) = best.unwrap_or((0.0, f64::NAN));
    InnerTest::NotInner { probe, imag }
}

/// Evidence returned by the finite-Blaschke test.
#[derive(Clone, Debug)]
pub struct BlaschkeTest {
    pub is_blaschke: bool,
    /// Largest relative deviation in the coefficient identity
    /// `P·P^♯ = Q·Q^♯` (common-degree form).
    pub coeff_residual: f64,
    /// Smallest denominator-root modulus, when there are poles.
    pub min_pole_modulus: Option<f64>,
}

/// Tests whether a disc symbol is a finite Blaschke product: the modulus is
/// identically 1 on the circle (coefficient identity) and every pole lies
/// outside the closed disc by margin `tau`.
pub fn is_finite_blaschke(phi_disc: &RationalMap, tau: f64, cfg: &Config) -> Result<BlaschkeTest> {
    let p = phi_disc.num();
    let q = phi_disc.den();
    let d = p.degree().max(q.degree());

    // z^{d-deg} padding aligns both sides at the common degree d.
    let shift = |poly: &Polynomial, by: usize| -> Polynomial {
        let mut coeffs = vec![c64(0.0, 0.0); by];
        coeffs.extend_from_slice(poly.coeffs());
        Polynomial::from_coeffs(coeffs)
    };
    let lhs = shift(&(p * &p.reversed_conjugate()), d - p.degree());
    let rhs = shift(&(q * &q.reversed_conjugate()), d - q.degree());

    let scale = lhs.max_coeff_norm().max(rhs.max_coeff_norm());
    let mut residual = 0.0_f64;
    for k in 0..=lhs.degree().max(rhs.degree()) {
        residual = residual.max((lhs.coeff(k) - rhs.coeff(k)).norm());
    }
    let coeff_residual = if scale > 0.0 { residual / scale } else { 0.0 };

    let min_pole_modulus = if q.degree() > 0 {
        let poles = crate::ratfunc::all_roots(q, cfg)?;
        Some(
            poles
                .iter()
                .map(|g| g.norm())
                .fold(f64::INFINITY, f64::min),
        )
    } else {
        None
    };

    let poles_outside = min_pole_modulus.is_none_or(|m| m >= 1.0 + tau);
    Ok(BlaschkeTest {
        is_blaschke: coeff_residual <= tau && poles_outside,
        coeff_residual,
        min_pole_modulus,
    })
}

/// Fraction of `samples` uniform circle points where `|Φ|` is within
/// `tau_boundary` of 1. For rational symbols this estimates the measure of
/// the unimodularity set, which is always 0 or 1.
pub fn boundary_unimodular_measure(
    phi_disc: &RationalMap,
    samples: usize,
    tau_boundary: f64,
) -> f64 {
    assert!(samples >= 256, "at least 256 boundary samples required");
    let mut hits = 0usize;
    for k in 0..samples {
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / samples as f64);
        match phi_disc.evaluate(z) {
            PointValue::Finite(v) => {
                if (v.norm() - 1.0).abs() <= tau_boundary {
                    hits += 1;
                }
            }
            PointValue::Infinite => {}
        }
    }
    hits as f64 / samples as f64
}
