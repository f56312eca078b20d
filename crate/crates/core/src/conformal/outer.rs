//! Outer functions from a prescribed boundary log-modulus.
//!
//! `f(z) = exp( (1/2π) ∫ (e^{it}+z)/(e^{it}−z) · u(e^{it}) dt )` is the
//! outer function with `log|f| = u` almost everywhere on the circle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{integrate_interval_complex, QuadratureSettings};

/// Log-modulus on one arc: a constant, or a smooth function of the angle.
#[derive(Clone)]
pub enum ArcModulus {
    Constant(f64),
    Smooth(std::sync::Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for ArcModulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ArcModulus::Constant(v) => write!(f, "Constant({v})"),
            ArcModulus::Smooth(_) => write!(f, "Smooth(..)"),
        }
    }
}

impl ArcModulus {
    fn eval(&self, t: f64) -> f64 {
        match self {
            ArcModulus::Constant(v) => *v,
            ArcModulus::Smooth(f) => f(t),
        }
    }
}

/// A circular arc `start ≤ t < end` (angles in radians, `end − start ≤ 2π`)
/// carrying a log-modulus value.
#[derive(Clone, Debug)]
pub struct BoundaryArc {
    pub start: f64,
    pub end: f64,
    pub log_modulus: ArcModulus,
}

/// A piecewise log-modulus on the circle, given as disjoint arcs. Angles
/// not covered by any arc carry log-modulus 0 (modulus 1).
#[derive(Clone, Debug)]
pub struct OuterFunctionSpec {
    arcs: Vec<BoundaryArc>,
}

impl OuterFunctionSpec {
    /// Validates that arcs are well-formed and pairwise disjoint after
    /// normalization to `[0, 2π)` starts, and that the log-modulus stays
    /// bounded on each arc.
    pub fn new(arcs: Vec<BoundaryArc>) -> Result<Self> {
        let tau = std::f64::consts::TAU;
        let mut normalized = Vec::with_capacity(arcs.len());
        for arc in arcs {
            let len = arc.end - arc.start;
            if !(0.0..=tau).contains(&len) || len == 0.0 {
                return Err(Error::Precondition {
                    what: format!("arc [{}, {}) must have length in (0, 2π]", arc.start, arc.end),
                });
            }
            for k in 0..=32 {
                let t = arc.start + len * k as f64 / 32.0;
                let v = arc.log_modulus.eval(t);
                if !v.is_finite() {
                    return Err(Error::Precondition {
                        what: format!("log-modulus unbounded at angle {t}"),
                    });
                }
            }
            let start = arc.start.rem_euclid(tau);
            normalized.push(BoundaryArc {
                start,
                end: start + len,
                log_modulus: arc.log_modulus,
            });
        }
        normalized.sort_by(|a, b| a.start.total_cmp(&b.start));
        for pair in normalized.windows(2) {
            if pair[0].end > pair[1].start + 1e-12 {
                return Err(Error::Precondition {
                    what: "arcs overlap".into(),
                });
            }
        }
        if let (Some(first), Some(last)) = (normalized.first(), normalized.last()) {
            if last.end - tau > first.start + 1e-12 {
                return Err(Error::Precondition {
                    what: "arcs overlap across the cut".into(),
                });
            }
        }
        Ok(Self { arcs: normalized })
    }

    /// Two complementary arcs: log-modulus 0 on `[0, 2π·measure)` and
    /// `log(low)` on the rest. `measure` is the normalized length of the
    /// modulus-1 arc.
    pub fn two_level(measure: f64, low: f64) -> Result<Self> {
        let tau = std::f64::consts::TAU;
        Self::new(vec![
            BoundaryArc {
                start: 0.0,
                end: tau * measure,
                log_modulus: ArcModulus::Constant(0.0),
            },
            BoundaryArc {
                start: tau * measure,
                end: tau,
                log_modulus: ArcModulus::Constant(low.ln()),
            },
        ])
    }

    pub fn arcs(&self) -> &[BoundaryArc] {
        &self.arcs
    }

    /// Boundary log-modulus at angle `t` (0 outside all arcs).
    pub fn log_modulus_at(&self, t: f64) -> f64 {
        let tau = std::f64::consts::TAU;
        let t = t.rem_euclid(tau);
        for arc in &self.arcs {
            if (arc.start..arc.end).contains(&t) || (arc.start..arc.end).contains(&(t + tau)) {
                return arc.log_modulus.eval(t);
            }
        }
        0.0
    }
}

/// Evaluates the outer function with boundary log-modulus `spec` at a point
/// strictly inside the disc. Quadrature subdivides each arc with endpoint
/// grading scaled to the distance from `z` to the circle; non-convergence
/// is reported with the accumulated error estimate.
pub fn build_outer(
    spec: &OuterFunctionSpec,
    z: Complex64,
    settings: &QuadratureSettings,
) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::Precondition {
            what: format!("outer evaluation requires |z| < 1, got |z| = {}", z.norm()),
        });
    }

    let mut herglotz = Complex64::new(0.0, 0.0);
    let mut err_acc = 0.0;
    let gap = (1.0 - z.norm()).max(1e-12);
    for arc in spec.arcs.iter() {
        let kernel = |t: f64| {
            let e = Complex64::from_polar(1.0, t);
            (e + z) / (e - z) * arc.log_modulus.eval(t)
        };
        // Geometric grading toward both endpoints, down to the scale at
        // which the Herglotz kernel stops varying across the panel.
        let len = arc.end - arc.start;
        let mut breaks = Vec::new();
        let mut off = len / 2.0;
        while off > gap / 4.0 {
            breaks.push(arc.start + off);
            breaks.push(arc.end - off);
            off *= 0.5;
        }
        let (value, err, converged) =
            integrate_interval_complex(&kernel, arc.start, arc.end, &breaks, settings);
        if !converged {
            return Err(Error::QuadratureTolerance {
                what: format!("outer-function arc [{}, {})", arc.start, arc.end),
                value: value.norm(),
                error_estimate: err,
            });
        }
        herglotz += value;
        err_acc += err;
    }
    let _ = err_acc;
    Ok((herglotz / std::f64::consts::TAU).exp())
}
