//! Minimal double-double arithmetic for coefficient-level accumulation.
//!
//! Symbolic composition mixes polynomial products whose terms are many
//! orders of magnitude larger than the coefficients they cancel down to;
//! carrying the accumulation in ~31 digits keeps the rounded result at
//! working precision regardless of that cancellation.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    let err = f64::mul_add(a, b, -p);
    Dd { hi: p, lo: err }
}

// Requires |a| ≥ |b| or a = 0.
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        quick_two_sum(s.hi, s.lo + self.lo + o.lo)
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(Dd {
            hi: -o.hi,
            lo: -o.lo,
        })
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        quick_two_sum(p.hi, p.lo + self.hi * o.lo + self.lo * o.hi)
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Complex number with double-double components.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CDd {
    re: Dd,
    im: Dd,
}

impl CDd {
    pub fn from_complex(c: Complex64) -> Self {
        CDd {
            re: Dd::from_f64(c.re),
            im: Dd::from_f64(c.im),
        }
    }

    pub fn add(self, o: CDd) -> CDd {
        CDd {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    pub fn mul(self, o: CDd) -> CDd {
        CDd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn value(self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Dense polynomial with double-double coefficients, ascending order.
pub(crate) type DdPoly = Vec<CDd>;

pub(crate) fn from_poly(p: &super::poly::Polynomial) -> DdPoly {
    p.coeffs().iter().map(|&c| CDd::from_complex(c)).collect()
}

pub(crate) fn one() -> DdPoly {
    vec![CDd::from_complex(Complex64::new(1.0, 0.0))]
}

pub(crate) fn mul(a: &DdPoly, b: &DdPoly) -> DdPoly {
    let mut out = vec![CDd::default(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(x.mul(y));
        }
    }
    out
}

/// `acc += c · term`.
pub(crate) fn add_scaled(acc: &mut DdPoly, term: &DdPoly, c: Complex64) {
    if acc.len() < term.len() {
        acc.resize(term.len(), CDd::default());
    }
    let cc = CDd::from_complex(c);
    for (slot, &t) in acc.iter_mut().zip(term.iter()) {
        *slot = slot.add(cc.mul(t));
    }
}

pub(crate) fn to_poly(v: &DdPoly, tau_trim: f64) -> super::poly::Polynomial {
    super::poly::Polynomial::new(v.iter().map(|c| c.value()).collect(), tau_trim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_recovers_cancelled_bits() {
        // (1e8 + 1) · (1e8 - 1) - 1e16 = -1; plain f64 loses the -1.
        let a = Dd::from_f64(1e8).add(Dd::from_f64(1.0));
        let b = Dd::from_f64(1e8).sub(Dd::from_f64(1.0));
        let p = a.mul(b).sub(Dd::from_f64(1e16));
        assert_eq!(p.value(), -1.0);
    }

    #[test]
    fn complex_mul_matches_f64_at_small_magnitudes() {
        let x = Complex64::new(1.25, -0.5);
        let y = Complex64::new(-2.0, 0.375);
        let z = CDd::from_complex(x).mul(CDd::from_complex(y)).value();
        assert_eq!(z, x * y);
    }
}
