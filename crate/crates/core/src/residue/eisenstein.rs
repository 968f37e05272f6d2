use std::sync::Arc;

use super::iso::TruncIso;
use super::ring::{RingElem, TruncatedRing};
use super::RingError;

/// `P(x) = x^d + π·Σ_{i<d} a_i x^i` with the cofactors `a_i` known modulo `π^m`.
///
/// `P` is Eisenstein exactly when `a_0` is a unit.
#[derive(Clone)]
pub struct EisensteinPoly {
    ring: Arc<TruncatedRing>,
    cofactors: Vec<RingElem>,
}

impl std::fmt::Debug for EisensteinPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_string())
    }
}

impl PartialEq for EisensteinPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_ring(&other.ring) && self.cofactors == other.cofactors
    }
}

impl EisensteinPoly {
    /// From cofactors `a_0..a_{d-1}` in `O/p^m`.
    pub fn new(ring: Arc<TruncatedRing>, cofactors: Vec<RingElem>) -> Result<Self, RingError> {
        if cofactors.is_empty() {
            return Err(RingError::NotEisenstein("degree must be at least 1".into()));
        }
        if cofactors.iter().any(|&a| !ring.contains(a)) {
            return Err(RingError::Mismatch);
        }
        if !ring.is_unit(cofactors[0]) {
            return Err(RingError::NotEisenstein(
                "constant term must have valuation exactly 1".into(),
            ));
        }
        Ok(Self { ring, cofactors })
    }

    /// From the lower coefficients `c_0..c_{d-1}` of `P` itself, given in a ring
    /// of level `m+1`; the cofactors are `c_i/π mod π^m`.
    pub fn from_coefficients(
        coeff_ring: &TruncatedRing,
        coefficients: &[RingElem],
    ) -> Result<Self, RingError> {
        let m = coeff_ring
            .level()
            .checked_sub(1)
            .filter(|&m| m > 0)
            .ok_or_else(|| {
                RingError::NotEisenstein("coefficient ring must have level at least 2".into())
            })?;
        let target = Arc::new(TruncatedRing::new(coeff_ring.descriptor().clone(), m)?);
        let mut cofactors = Vec::with_capacity(coefficients.len());
        for (i, &c) in coefficients.iter().enumerate() {
            if !coeff_ring.contains(c) {
                return Err(RingError::Mismatch);
            }
            let a = coeff_ring.div_pi_pow(c, 1).map_err(|_| {
                RingError::NotEisenstein(format!("coefficient {i} is not divisible by π"))
            })?;
            cofactors.push(coeff_ring.reduce_to(&target, a)?);
        }
        Self::new(target, cofactors)
    }

    pub fn degree(&self) -> usize {
        self.cofactors.len()
    }

    pub fn level(&self) -> u32 {
        self.ring.level()
    }

    pub fn ring(&self) -> &Arc<TruncatedRing> {
        &self.ring
    }

    pub fn cofactors(&self) -> &[RingElem] {
        &self.cofactors
    }

    /// Coefficients `π·a_i` of `P` in the level-`(m+1)` ring.
    pub fn coefficients(&self) -> Result<(TruncatedRing, Vec<RingElem>), RingError> {
        let up = TruncatedRing::new(self.ring.descriptor().clone(), self.ring.level() + 1)?;
        let pi = up.pi();
        let coeffs = self
            .cofactors
            .iter()
            .map(|&a| self.ring.lift_to(&up, a).map(|a| up.mul(pi, a)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((up, coeffs))
    }

    /// Coefficient-wise transfer `a_i ↦ ψ_m(a_i)` to the other field.
    pub fn transfer(&self, psi: &TruncIso) -> Result<EisensteinPoly, RingError> {
        if !psi.source().same_ring(&self.ring) {
            return Err(RingError::Mismatch);
        }
        let image = self.cofactors.iter().map(|&a| psi.apply(a)).collect();
        EisensteinPoly::new(psi.target().clone(), image)
    }
}

impl std::fmt::Display for EisensteinPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (up, coeffs) = self.coefficients().map_err(|_| std::fmt::Error)?;
        let d = self.degree();
        let mut terms = vec![if d == 1 {
            "x".to_string()
        } else {
            format!("x^{d}")
        }];
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == up.zero() {
                continue;
            }
            let s = up.format(c);
            let s = if s.contains(" + ") && i > 0 {
                format!("({s})")
            } else {
                s
            };
            terms.push(match i {
                0 => s,
                1 => format!("{s}·x"),
                _ => format!("{s}·x^{i}"),
            });
        }
        f.write_str(&terms.join(" + "))
    }
}
