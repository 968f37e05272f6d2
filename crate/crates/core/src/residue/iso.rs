use std::sync::Arc;

use super::ring::{RingElem, TruncatedRing};
use super::RingError;

/// Rings up to this size are audited on every pair of elements.
const EXHAUSTIVE_AUDIT_LIMIT: u64 = 10_000;
const SAMPLED_AUDIT_PAIRS: u64 = 200_000;

/// A ring isomorphism `O_F/p_F^l → O_F'/p_F'^l` fixed by the images of the
/// uniformizer and of the residue-field generator, audited at construction.
#[derive(Clone)]
pub struct TruncIso {
    source: Arc<TruncatedRing>,
    target: Arc<TruncatedRing>,
    pi_image: RingElem,
    gen_image: RingElem,
    /// Image code of each source code.
    table: Vec<u32>,
}

impl std::fmt::Debug for TruncIso {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "TruncIso({:?} -> {:?}, π ↦ {})",
            self.source,
            self.target,
            self.target.format(self.pi_image)
        )
    }
}

impl TruncIso {
    pub fn new(
        source: Arc<TruncatedRing>,
        target: Arc<TruncatedRing>,
        pi_image: RingElem,
        gen_image: RingElem,
    ) -> Result<Self, RingError> {
        let fail = |msg: String| Err(RingError::NotAnIsomorphism(msg));
        if !target.contains(pi_image) || !target.contains(gen_image) {
            return Err(RingError::Mismatch);
        }
        if source.level() != target.level() {
            return fail(format!(
                "levels differ: {} vs {}",
                source.level(),
                target.level()
            ));
        }
        if source.size() != target.size() {
            return fail(format!(
                "sizes differ: {} vs {}",
                source.size(),
                target.size()
            ));
        }
        let table = Self::image_table(&source, &target, pi_image, gen_image);
        let iso = Self {
            source,
            target,
            pi_image,
            gen_image,
            table,
        };
        iso.audit()?;
        Ok(iso)
    }

    /// `π ↦ π'`, `y ↦ y'`.
    pub fn aligned(
        source: Arc<TruncatedRing>,
        target: Arc<TruncatedRing>,
    ) -> Result<Self, RingError> {
        let pi = target.pi();
        let y = target.residue_generator();
        Self::new(source, target, pi, y)
    }

    pub fn identity(ring: Arc<TruncatedRing>) -> Result<Self, RingError> {
        Self::aligned(ring.clone(), ring)
    }

    fn image_table(
        source: &TruncatedRing,
        target: &TruncatedRing,
        pi_image: RingElem,
        gen_image: RingElem,
    ) -> Vec<u32> {
        let f = source.descriptor().f() as usize;
        let slots = source.coords(source.zero()).len() / f;
        let pi_powers: Vec<RingElem> = (0..slots as u32).map(|i| target.pow(pi_image, i)).collect();
        let gen_powers: Vec<RingElem> = (0..f as u32).map(|j| target.pow(gen_image, j)).collect();
        source
            .elements()
            .map(|x| {
                let c = source.coords(x);
                let mut acc = target.zero();
                for (idx, &d) in c.iter().enumerate() {
                    if d == 0 {
                        continue;
                    }
                    let (i, j) = (idx / f, idx % f);
                    let term =
                        target.mul(target.from_int(d), target.mul(gen_powers[j], pi_powers[i]));
                    acc = target.add(acc, term);
                }
                acc.code()
            })
            .collect()
    }

    fn audit(&self) -> Result<(), RingError> {
        let fail = |msg: String| Err(RingError::NotAnIsomorphism(msg));
        let n = self.source.size();
        let mut seen = vec![false; n as usize];
        for &c in &self.table {
            if std::mem::replace(&mut seen[c as usize], true) {
                return fail("not injective".into());
            }
        }
        let s = &*self.source;
        let t = &*self.target;
        let check = |a: u32, b: u32| -> Result<(), RingError> {
            let (x, y) = (s.from_code(a), s.from_code(b));
            let (ix, iy) = (self.apply(x), self.apply(y));
            if self.apply(s.add(x, y)) != t.add(ix, iy) {
                return fail(format!(
                    "not additive at ({}, {})",
                    s.format(x),
                    s.format(y)
                ));
            }
            if self.apply(s.mul(x, y)) != t.mul(ix, iy) {
                return fail(format!(
                    "not multiplicative at ({}, {})",
                    s.format(x),
                    s.format(y)
                ));
            }
            Ok(())
        };
        if n <= EXHAUSTIVE_AUDIT_LIMIT {
            for a in 0..n as u32 {
                for b in a..n as u32 {
                    check(a, b)?;
                }
            }
        } else {
            let mut state: u64 = 0x9e3779b97f4a7c15;
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % n) as u32
            };
            for _ in 0..SAMPLED_AUDIT_PAIRS {
                let (a, b) = (next(), next());
                check(a, b)?;
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<TruncatedRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TruncatedRing> {
        &self.target
    }

    pub fn level(&self) -> u32 {
        self.source.level()
    }

    pub fn pi_image(&self) -> RingElem {
        self.pi_image
    }

    /// Whether the uniformizer class goes to the target's uniformizer class.
    pub fn is_uniformizer_aligned(&self) -> bool {
        self.pi_image == self.target.pi()
    }

    #[inline]
    pub fn apply(&self, x: RingElem) -> RingElem {
        debug_assert!(self.source.contains(x));
        self.target.from_code(self.table[x.code() as usize])
    }

    /// The induced isomorphism at a lower level.
    pub fn reduce(&self, level: u32) -> Result<TruncIso, RingError> {
        if level == self.level() {
            return Ok(self.clone());
        }
        let src = Arc::new(TruncatedRing::new(self.source.descriptor().clone(), level)?);
        let dst = Arc::new(TruncatedRing::new(self.target.descriptor().clone(), level)?);
        let pi = self.target.reduce_to(&dst, self.pi_image)?;
        let y = self.target.reduce_to(&dst, self.gen_image)?;
        TruncIso::new(src, dst, pi, y)
    }

    pub fn inverse(&self) -> Result<TruncIso, RingError> {
        let find = |img: RingElem| {
            let code = self
                .table
                .iter()
                .position(|&c| c == img.code())
                .expect("bijective");
            self.source.from_code(code as u32)
        };
        let pi = find(self.target.pi());
        let y = find(self.target.residue_generator());
        TruncIso::new(self.target.clone(), self.source.clone(), pi, y)
    }
}
