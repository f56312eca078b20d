//! Partial fraction decomposition of rational maps.

use num_complex::Complex64;

use super::poly::Polynomial;
use super::ratmap::{probe_rng, PointValue, RationalMap};
use super::roots::{all_roots, cluster_roots};
use crate::config::Config;
use crate::error::{Error, Result};

/// One pole of the decomposition: `Σ_j coeffs[j-1] / (z - pole)^j` for
/// `j = 1..=order`.
#[derive(Clone, Debug)]
pub struct PfTerm {
    pub pole: Complex64,
    pub order: usize,
    pub coeffs: Vec<Complex64>,
}

/// `poly_part(z) + Σ_i Σ_j μ_{ij} / (z - γ_i)^j`, with pairwise distinct
/// poles, validated against the source map at random probe points.
#[derive(Clone, Debug)]
pub struct PartialFractionForm {
    pub poly_part: Polynomial,
    pub terms: Vec<PfTerm>,
}

impl PartialFractionForm {
    pub fn eval(&self, z: Complex64) -> PointValue {
        let mut acc = self.poly_part.eval(z);
        for term in &self.terms {
            let gap = z - term.pole;
            if gap.norm() < 1e-300 {
                return PointValue::Infinite;
            }
            let inv = gap.inv();
            let mut powered = Complex64::new(1.0, 0.0);
            for &mu in &term.coeffs {
                powered *= inv;
                acc += mu * powered;
            }
        }
        PointValue::Finite(acc)
    }

    /// Rounding-noise scale of `eval(z)`: the term magnitudes that machine
    /// epsilon can perturb.
    pub fn eval_noise_floor(&self, z: Complex64) -> f64 {
        let mut scale = self.poly_part.eval_scale(z);
        for term in &self.terms {
            let gap = (z - term.pole).norm();
            if gap < 1e-300 {
                return f64::INFINITY;
            }
            let mut powered = 1.0;
            for &mu in &term.coeffs {
                powered /= gap;
                scale += mu.norm() * powered;
            }
        }
        f64::EPSILON * scale
    }

    /// Recombines the form over the common denominator `Π (z - γ_i)^{m_i}`.
    pub fn to_rational_map(&self, cfg: &Config) -> Result<RationalMap> {
        let mut den = Polynomial::one();
        for term in &self.terms {
            for _ in 0..term.order {
                den = &den * &Polynomial::from_roots(Complex64::new(1.0, 0.0), &[term.pole]);
            }
        }
        let mut num = &self.poly_part * &den;
        for (i, term) in self.terms.iter().enumerate() {
            // den / (z - γ_i)^j, assembled from the other factors exactly.
            let mut others = Polynomial::one();
            for (k, other) in self.terms.iter().enumerate() {
                if k != i {
                    for _ in 0..other.order {
                        others =
                            &others * &Polynomial::from_roots(Complex64::new(1.0, 0.0), &[other.pole]);
                    }
                }
            }
            for (j, &mu) in term.coeffs.iter().enumerate() {
                let residual_power = term.order - (j + 1);
                let mut factor = others.clone();
                for _ in 0..residual_power {
                    factor = &factor * &Polynomial::from_roots(Complex64::new(1.0, 0.0), &[term.pole]);
                }
                num = &num + &factor.scale(mu);
            }
        }
        RationalMap::with_config(num, den, cfg)
    }
}

/// Decomposes `r` into polynomial part plus pole terms. Pole locations come
/// from clustered denominator roots; the coefficients at each pole come
/// from a truncated power-series division, which is exact for exact inputs.
///
/// When the reconstruction probe fails at the configured cluster radius —
/// typically a repeated root split by rounding into a just-too-wide pair —
/// the radius escalates a few dyadic steps; multiplicity is a
/// tolerance-scale notion and the probe decides which reading is right.
pub fn partial_fractions(r: &RationalMap, cfg: &Config) -> Result<PartialFractionForm> {
    let (poly_part, rem) = r.num().divmod(r.den());

    if rem.is_zero() || r.den().degree() == 0 {
        let form = PartialFractionForm {
            poly_part,
            terms: Vec::new(),
        };
        validate_reconstruction(r, &form, cfg)?;
        return Ok(form);
    }

    let den_roots = all_roots(r.den(), cfg)?;
    let mut failure = None;
    for escalation in [1.0, 4.0, 16.0, 64.0] {
        let clusters = cluster_roots(&den_roots, cfg.tau_cluster * escalation);
        let terms = extract_terms(&rem, &clusters);
        let form = PartialFractionForm {
            poly_part: poly_part.clone(),
            terms,
        };
        match validate_reconstruction(r, &form, cfg) {
            Ok(()) => return Ok(form),
            Err(e) => failure = Some(e),
        }
    }
    Err(failure.expect("escalation loop ran at least once"))
}

fn extract_terms(rem: &Polynomial, clusters: &[crate::ratfunc::RootCluster]) -> Vec<PfTerm> {
    let mut terms = Vec::with_capacity(clusters.len());
    for (i, cluster) in clusters.iter().enumerate() {
        let gamma = cluster.value;
        let m = cluster.multiplicity;

        // h = Π_{k≠i} (z - γ_k)^{m_k}, rebuilt from the cluster data so it
        // stays consistent with the pole locations.
        let mut h = Polynomial::one();
        for (k, other) in clusters.iter().enumerate() {
            if k != i {
                for _ in 0..other.multiplicity {
                    h = &h * &Polynomial::from_roots(Complex64::new(1.0, 0.0), &[other.value]);
                }
            }
        }

        // rem/h as a power series in s = z - γ, to order m-1:
        // proper(z) = c(s)/s^m near γ, so μ_j = c_{m-j}.
        let a = rem.taylor_at(gamma, m - 1);
        let b = h.taylor_at(gamma, m - 1);
        let mut c = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..m {
            let mut v = a[k];
            for l in 0..k {
                v -= c[l] * b[k - l];
            }
            c[k] = v / b[0];
        }
        let coeffs: Vec<Complex64> = (1..=m).map(|j| c[m - j]).collect();
        terms.push(PfTerm {
            pole: gamma,
            order: m,
            coeffs,
        });
    }
    terms
}

/// Probe-point check of the reconstruction identity, relative to the value
/// magnitude. Failure reports the smallest pole gap as a conditioning hint.
fn validate_reconstruction(
    r: &RationalMap,
    form: &PartialFractionForm,
    cfg: &Config,
) -> Result<()> {
    let mut rng = probe_rng(cfg, 0xF7);
    let pole_scale = form
        .terms
        .iter()
        .map(|t| t.pole.norm())
        .fold(1.0_f64, f64::max);

    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for _attempt in 0..400 {
        if checked == 20 {
            break;
        }
        let z = {
            use rand::Rng;
            let radius = rng.gen_range(1.2..3.0) * pole_scale;
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(radius, angle)
        };
        if form.terms.iter().any(|t| (z - t.pole).norm() < 1e-2 * pole_scale) {
            continue;
        }
        let (a, b) = match (r.evaluate(z), form.eval(z)) {
            (PointValue::Finite(a), PointValue::Finite(b)) => (a, b),
            _ => continue,
        };
        let floor = 1e3 * (r.eval_noise_floor(z) + form.eval_noise_floor(z));
        let rel = ((a - b).norm() - floor).max(0.0) / (1.0 + a.norm().max(b.norm()));
        worst = worst.max(rel);
        checked += 1;
    }

    if worst > cfg.tau_pf {
        let mut min_gap = f64::INFINITY;
        for (i, a) in form.terms.iter().enumerate() {
            for b in form.terms.iter().skip(i + 1) {
                min_gap = min_gap.min((a.pole - b.pole).norm());
            }
        }
        return Err(Error::IllConditioned {
            residual: worst,
            min_pole_gap: min_gap,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn expanded_form_passes_through() {
        // z - 1/z
        let r = RationalMap::from_real(&[-1.0, 0.0, 1.0], &[0.0, 1.0]).unwrap();
        let pf = partial_fractions(&r, &cfg()).unwrap();
        assert_eq!(pf.poly_part, Polynomial::from_real(&[0.0, 1.0]));
        assert_eq!(pf.terms.len(), 1);
        assert_eq!(pf.terms[0].order, 1);
        assert!((pf.terms[0].pole).norm() < 1e-12);
        assert!((pf.terms[0].coeffs[0] - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn division_extracts_polynomial_part() {
        // (z^2 + 1)/z = z + 1/z
        let r = RationalMap::from_real(&[1.0, 0.0, 1.0], &[0.0, 1.0]).unwrap();
        let pf = partial_fractions(&r, &cfg()).unwrap();
        assert_eq!(pf.poly_part, Polynomial::from_real(&[0.0, 1.0]));
        assert_eq!(pf.terms.len(), 1);
        assert!((pf.terms[0].coeffs[0] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn repeated_pole_coefficients() {
        // 1/z^2: coefficients [0, 1] over orders 1, 2.
        let r = RationalMap::from_real(&[1.0], &[0.0, 0.0, 1.0]).unwrap();
        let pf = partial_fractions(&r, &cfg()).unwrap();
        assert!(pf.poly_part.is_zero());
        assert_eq!(pf.terms.len(), 1);
        assert_eq!(pf.terms[0].order, 2);
        assert!((pf.terms[0].coeffs[0]).norm() < 1e-12);
        assert!((pf.terms[0].coeffs[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn two_simple_poles() {
        // 2z/(z^2+1) = 1/(z-i) + 1/(z+i)
        let r = RationalMap::from_real(&[0.0, 2.0], &[1.0, 0.0, 1.0]).unwrap();
        let pf = partial_fractions(&r, &cfg()).unwrap();
        assert_eq!(pf.terms.len(), 2);
        for term in &pf.terms {
            assert_eq!(term.order, 1);
            assert!((term.coeffs[0] - c(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn reconstruction_round_trip_random_maps() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let cfg = cfg();
        for _ in 0..40 {
            let dn = rng.gen_range(1..=3usize);
            let dd = rng.gen_range(1..=3usize);
            let num: Vec<f64> = (0..=dn).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let den: Vec<f64> = (0..=dd).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let r = match RationalMap::from_real(&num, &den) {
                Ok(r) if r.den().degree() > 0 => r,
                _ => continue,
            };
            let pf = partial_fractions(&r, &cfg).unwrap();
            let back = pf.to_rational_map(&cfg).unwrap();
            let mut checked = 0;
            let mut probes = probe_rng(&cfg, 99);
            for _ in 0..200 {
                if checked == 50 {
                    break;
                }
                let z = super::super::ratmap::random_probe(&mut probes);
                let (a, b) = match (r.evaluate(z), back.evaluate(z)) {
                    (PointValue::Finite(a), PointValue::Finite(b)) => (a, b),
                    _ => continue,
                };
                assert!(
                    (a - b).norm() / (1.0 + a.norm()) < 1e-8,
                    "mismatch for {r} at {z}: {a} vs {b}"
                );
                checked += 1;
            }
        }
    }
}
