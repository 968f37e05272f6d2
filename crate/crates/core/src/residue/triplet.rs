use std::sync::Arc;

use super::iso::TruncIso;
use super::ring::{RingElem, TruncatedRing};
use super::{FieldDescriptor, RingError};

/// `Tr_m(F) = (O/p^m, p/p^{m+1}, ε)`.
///
/// The module `p/p^{m+1}` is stored as the multiples of `π` inside `O/p^{m+1}`.
pub struct DeligneTriplet {
    ring: Arc<TruncatedRing>,
    ambient: Arc<TruncatedRing>,
}

impl DeligneTriplet {
    pub fn new(desc: FieldDescriptor, m: u32) -> Result<Self, RingError> {
        Ok(Self {
            ring: Arc::new(TruncatedRing::new(desc.clone(), m)?),
            ambient: Arc::new(TruncatedRing::new(desc, m + 1)?),
        })
    }

    pub fn level(&self) -> u32 {
        self.ring.level()
    }

    pub fn ring(&self) -> &Arc<TruncatedRing> {
        &self.ring
    }

    /// The ring `O/p^{m+1}` containing the module.
    pub fn ambient(&self) -> &Arc<TruncatedRing> {
        &self.ambient
    }

    /// Elements of `p/p^{m+1}`.
    pub fn module_elements(&self) -> Vec<RingElem> {
        self.ambient
            .elements()
            .filter(|&x| self.ambient.valuation(x).is_none_or(|v| v >= 1))
            .collect()
    }

    /// Module generator: the class of `π`.
    pub fn generator(&self) -> RingElem {
        self.ambient.pi()
    }

    /// `r · x` for `r ∈ O/p^m` and `x ∈ p/p^{m+1}`; independent of the lift of `r`.
    pub fn act(&self, r: RingElem, x: RingElem) -> Result<RingElem, RingError> {
        let lifted = self.ring.lift_to(&self.ambient, r)?;
        Ok(self.ambient.mul(lifted, x))
    }

    /// `ε : p/p^{m+1} → p/p^m`, landing in `O/p^m`.
    pub fn epsilon(&self, x: RingElem) -> Result<RingElem, RingError> {
        self.ambient.reduce_to(&self.ring, x)
    }

    /// The triplet isomorphism induced by a truncation isomorphism at level `m+1`.
    pub fn map_with(&self, psi: &TruncIso) -> Result<(TruncIso, TruncIso), RingError> {
        if !psi.source().same_ring(&self.ambient) {
            return Err(RingError::Mismatch);
        }
        Ok((psi.reduce(self.level())?, psi.clone()))
    }
}
