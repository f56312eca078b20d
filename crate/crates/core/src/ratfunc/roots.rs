//! Polynomial root finding by simultaneous (Aberth–Ehrlich) iteration.

use num_complex::Complex64;

use super::poly::Polynomial;
use crate::config::Config;
use crate::error::{Error, Result};

/// A cluster of nearby roots merged into one location with a combined
/// multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootCluster {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// All complex roots of `p`, with multiplicity, as a flat list of length
/// `deg p`. Exact trailing zero coefficients are stripped first so roots at
/// the origin come out exactly.
pub fn all_roots(p: &Polynomial, cfg: &Config) -> Result<Vec<Complex64>> {
    let p = Polynomial::new(p.coeffs().to_vec(), cfg.tau_trim);
    if p.is_zero() {
        return Err(Error::Precondition {
            what: "root finding on the zero polynomial".into(),
        });
    }
    if p.degree() == 0 {
        return Ok(Vec::new());
    }

    // Strip z^k | p exactly: coefficients below the trim threshold.
    let scale = p.max_coeff_norm();
    let zero_mult = p
        .coeffs()
        .iter()
        .take_while(|c| c.norm() <= cfg.tau_trim * scale)
        .count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zero_mult];
    let reduced = Polynomial::from_coeffs(p.coeffs()[zero_mult..].to_vec());

    match reduced.degree() {
        0 => {}
        1 => roots.push(-reduced.coeff(0) / reduced.coeff(1)),
        2 => roots.extend(quadratic_roots(&reduced)),
        _ => roots.extend(aberth(&reduced, cfg)?),
    }
    Ok(roots)
}

/// Roots of `p` merged into multiplicity clusters at radius
/// `tau · max(1, max |root|)`, sorted by real then imaginary part.
pub fn poly_roots(p: &Polynomial, tau: f64, cfg: &Config) -> Result<Vec<RootCluster>> {
    let roots = all_roots(p, cfg)?;
    Ok(cluster_roots(&roots, tau))
}

/// Greedy clustering of a root list; `tau` is absolute after scaling the
/// roots to unit magnitude order.
pub fn cluster_roots(roots: &[Complex64], tau: f64) -> Vec<RootCluster> {
    let scale = roots
        .iter()
        .map(|r| r.norm())
        .fold(1.0_f64, f64::max);
    let radius = tau * scale;

    let mut sorted: Vec<Complex64> = roots.to_vec();
    sorted.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &r in &sorted {
        match clusters
            .iter_mut()
            .find(|(center, _)| (*center - r).norm() <= radius)
        {
            Some((center, count)) => {
                // Running mean keeps the center at the cluster barycenter.
                *center = (*center * *count as f64 + r) / (*count as f64 + 1.0);
                *count += 1;
            }
            None => clusters.push((r, 1)),
        }
    }
    clusters.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    clusters
        .into_iter()
        .map(|(value, multiplicity)| RootCluster {
            value,
            multiplicity,
        })
        .collect()
}

fn quadratic_roots(p: &Polynomial) -> [Complex64; 2] {
    let (a, b, c) = (p.coeff(2), p.coeff(1), p.coeff(0));
    let disc = (b * b - 4.0 * a * c).sqrt();
    // Pick the sign that avoids cancellation in -b ± disc.
    let q = if (b + disc).norm() >= (b - disc).norm() {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    if q.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 2];
    }
    [q / a, c / q]
}

/// Simultaneous iteration for degree ≥ 3. Initial guesses sit on a circle
/// sized from the Fujiwara root bound, with an angular offset so real-axis
/// symmetry cannot trap the iteration.
fn aberth(p: &Polynomial, cfg: &Config) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let deriv = p.derivative();
    let lead = p.leading();

    let fujiwara = (0..n)
        .map(|k| (p.coeff(k) / lead).norm().powf(1.0 / (n - k) as f64))
        .fold(0.0_f64, f64::max)
        * 2.0;
    let radius = (fujiwara * 0.5).max(1e-3);

    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            Complex64::from_polar(
                radius,
                2.0 * std::f64::consts::PI * j as f64 / n as f64 + 0.437,
            )
        })
        .collect();

    let mut converged = false;
    for _sweep in 0..cfg.root_sweeps {
        let mut max_step = 0.0_f64;
        for j in 0..n {
            let pv = p.eval(z[j]);
            let dv = deriv.eval(z[j]);
            let newton = if dv.norm() == 0.0 {
                // Derivative vanished at the iterate; nudge instead.
                Complex64::new(1e-8 * (1.0 + z[j].norm()), 1e-8)
            } else {
                pv / dv
            };
            let mut coupling = Complex64::new(0.0, 0.0);
            for k in 0..n {
                if k != j {
                    let gap = z[j] - z[k];
                    if gap.norm() == 0.0 {
                        continue;
                    }
                    coupling += gap.inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * coupling;
            let step = if denom.norm() < 1e-300 {
                newton
            } else {
                newton / denom
            };
            z[j] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[j].norm()));
        }
        if max_step < 1e-14 {
            converged = true;
            break;
        }
    }

    // Multiple roots stall the sweep-step criterion; accept on residual.
    let threshold = 1e-9;
    if !converged {
        for &root in &z {
            let residual = p.eval(root).norm();
            let scale = p.eval_scale(root).max(f64::MIN_POSITIVE);
            if residual > threshold * scale {
                return Err(Error::RootFinding {
                    poly: p.to_string(),
                    residual: residual / scale,
                    threshold,
                });
            }
        }
    }
    Ok(z)
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

    fn assert_contains_root(roots: &[RootCluster], value: Complex64, mult: usize, tol: f64) {
        let hit = roots
            .iter()
            .find(|r| (r.value - value).norm() < tol)
            .unwrap_or_else(|| panic!("no root near {value} in {roots:?}"));
        assert_eq!(hit.multiplicity, mult, "multiplicity at {value}");
    }

    #[test]
    fn symmetric_quadratic() {
        // z^2 + 1
        let p = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        let roots = poly_roots(&p, cfg().tau_cluster, &cfg()).unwrap();
        assert_eq!(roots.len(), 2);
        assert_contains_root(&roots, c(0.0, 1.0), 1, 1e-10);
        assert_contains_root(&roots, c(0.0, -1.0), 1, 1e-10);
    }

    #[test]
    fn repeated_root_clusters() {
        // (z-1)^2 (z+2) = z^3 - 3z + 2
        let p = Polynomial::from_real(&[2.0, -3.0, 0.0, 1.0]);
        let roots = poly_roots(&p, cfg().tau_cluster, &cfg()).unwrap();
        assert_eq!(roots.len(), 2);
        assert_contains_root(&roots, c(1.0, 0.0), 2, 1e-6);
        assert_contains_root(&roots, c(-2.0, 0.0), 1, 1e-10);
    }

    #[test]
    fn cubic_with_rational_roots() {
        // z^3 - 2z^2 - z + 2 = (z-1)(z+1)(z-2)
        let p = Polynomial::from_real(&[2.0, -1.0, -2.0, 1.0]);
        let roots = poly_roots(&p, cfg().tau_cluster, &cfg()).unwrap();
        assert_eq!(roots.len(), 3);
        assert_contains_root(&roots, c(1.0, 0.0), 1, 1e-9);
        assert_contains_root(&roots, c(-1.0, 0.0), 1, 1e-9);
        assert_contains_root(&roots, c(2.0, 0.0), 1, 1e-9);
    }

    #[test]
    fn exact_zero_roots_are_stripped() {
        // z^2 (z - 3)
        let p = Polynomial::from_real(&[0.0, 0.0, -3.0, 1.0]);
        let roots = poly_roots(&p, cfg().tau_cluster, &cfg()).unwrap();
        assert_contains_root(&roots, c(0.0, 0.0), 2, 1e-12);
        assert_contains_root(&roots, c(3.0, 0.0), 1, 1e-10);
    }

    #[test]
    fn roots_then_expansion_recovers_coefficients() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let deg = rng.gen_range(1..=8usize);
            // Random well-separated roots.
            let mut roots: Vec<Complex64> = Vec::new();
            while roots.len() < deg {
                let cand = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                if roots.iter().all(|r| (*r - cand).norm() >= 0.1) {
                    roots.push(cand);
                }
            }
            let p = Polynomial::from_roots(c(1.0, 0.0), &roots);
            let found = all_roots(&p, &cfg()).unwrap();
            let q = Polynomial::from_roots(c(1.0, 0.0), &found);
            let scale = p.max_coeff_norm();
            for k in 0..=deg {
                assert!(
                    (p.coeff(k) - q.coeff(k)).norm() <= 1e-8 * scale,
                    "coefficient {k} mismatch: {} vs {}",
                    p.coeff(k),
                    q.coeff(k)
                );
            }
        }
    }

    #[test]
    fn nonconvergence_is_reported_not_silent() {
        // Budget of zero sweeps forces the residual check to fail.
        let mut tight = cfg();
        tight.root_sweeps = 0;
        let p = Polynomial::from_real(&[2.0, -1.0, -2.0, 1.0]);
        let err = all_roots(&p, &tight).unwrap_err();
        assert!(matches!(err, Error::RootFinding { .. }), "got {err:?}");
    }
}
