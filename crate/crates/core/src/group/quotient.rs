use std::collections::HashMap;
use std::io::{Read, Write};
use std::sync::Arc;

use super::matrix;
use crate::error::{Error, Result};
use crate::residue::{RingElem, TruncatedRing};
use crate::root_datum::FamilyKind;

/// Largest finite group `K/K_m` we are willing to enumerate.
pub const QUOTIENT_GUARD: u64 = 1_000_000;
/// Largest number of candidate matrices scanned during enumeration.
const CANDIDATE_GUARD: u64 = 1 << 24;
const MUL_TABLE_LIMIT: usize = 1024;

pub const CACHE_MAGIC: &[u8; 4] = b"HKLQ";
pub const CACHE_VERSION: u32 = 1;

/// `|GL_n(O/π^M)|` or `|SL_n(O/π^M)|` for residue field size `q`.
pub fn closed_form_order(kind: FamilyKind, n: usize, q: u64, level: u32) -> u64 {
    let n2 = (n * n) as u32;
    let mut gl = q.pow((level - 1) * n2);
    for i in 0..n as u32 {
        gl *= q.pow(n as u32) - q.pow(i);
    }
    match kind {
        FamilyKind::Gl => gl,
        FamilyKind::Sl => gl / (q.pow(level - 1) * (q - 1)),
    }
}

/// The finite group `K/K_m = G(O/p^m)`, enumerated in coordinate-lexicographic
/// order of the entry codes (row-major).
pub struct LevelQuotient {
    ring: Arc<TruncatedRing>,
    kind: FamilyKind,
    n: usize,
    codes: Vec<u32>,
    index: HashMap<Box<[u32]>, u32>,
    identity: u32,
    inverse: Vec<u32>,
    mul_table: Option<Vec<u32>>,
}

impl std::fmt::Debug for LevelQuotient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "LevelQuotient({:?}_{} over {:?}, {} elements)",
            self.kind,
            self.n,
            self.ring,
            self.len()
        )
    }
}

impl LevelQuotient {
    pub fn enumerate(ring: Arc<TruncatedRing>, kind: FamilyKind, n: usize) -> Result<Self> {
        let expected = closed_form_order(kind, n, ring.q(), ring.level());
        if expected > QUOTIENT_GUARD {
            return Err(Error::guard("K/K_m enumeration", expected, QUOTIENT_GUARD));
        }
        let size = ring.size();
        let n2 = n * n;
        let candidates = size.checked_pow(n2 as u32).unwrap_or(u64::MAX);
        if candidates > CANDIDATE_GUARD {
            return Err(Error::guard(
                "K/K_m candidate matrices",
                candidates,
                CANDIDATE_GUARD,
            ));
        }
        let one = ring.one();
        let mut codes = Vec::with_capacity(expected as usize * n2);
        let mut digits = vec![0u32; n2];
        let mut mat = vec![ring.zero(); n2];
        'outer: loop {
            for (m, &d) in mat.iter_mut().zip(&digits) {
                *m = ring.from_code(d);
            }
            let d = matrix::det(&ring, n, &mat);
            let ok = match kind {
                FamilyKind::Gl => ring.is_unit(d),
                FamilyKind::Sl => d == one,
            };
            if ok {
                codes.extend_from_slice(&digits);
            }
            for pos in (0..n2).rev() {
                digits[pos] += 1;
                if (digits[pos] as u64) < size {
                    continue 'outer;
                }
                digits[pos] = 0;
            }
            break;
        }
        let q = Self::assemble(ring, kind, n, codes)?;
        if q.len() as u64 != expected {
            return Err(Error::Audit(format!(
                "enumerated {} elements, closed form gives {expected}",
                q.len()
            )));
        }
        Ok(q)
    }

    fn assemble(
        ring: Arc<TruncatedRing>,
        kind: FamilyKind,
        n: usize,
        codes: Vec<u32>,
    ) -> Result<Self> {
        let n2 = n * n;
        let count = codes.len() / n2;
        let mut index = HashMap::with_capacity(count);
        for (i, chunk) in codes.chunks(n2).enumerate() {
            if index
                .insert(chunk.to_vec().into_boxed_slice(), i as u32)
                .is_some()
            {
                return Err(Error::Audit("duplicate element in K/K_m table".into()));
            }
        }
        let id_codes: Box<[u32]> = matrix::identity(&ring, n)
            .iter()
            .map(|x| x.code())
            .collect();
        let identity = *index
            .get(&id_codes)
            .ok_or_else(|| Error::Audit("identity missing from K/K_m table".into()))?;
        let mut q = Self {
            ring,
            kind,
            n,
            codes,
            index,
            identity,
            inverse: Vec::new(),
            mul_table: None,
        };
        let mut inverse = Vec::with_capacity(count);
        for i in 0..count as u32 {
            let m = q.matrix(i);
            let d = matrix::det(&q.ring, n, &m);
            let dinv = q.ring.inverse(d)?;
            let inv = matrix::scale(&q.ring, &matrix::adjugate(&q.ring, n, &m), dinv);
            inverse.push(
                q.index_of(&inv)
                    .ok_or_else(|| Error::Audit("K/K_m table not closed under inverse".into()))?,
            );
        }
        q.inverse = inverse;
        if count <= MUL_TABLE_LIMIT {
            let mut table = Vec::with_capacity(count * count);
            for i in 0..count as u32 {
                for j in 0..count as u32 {
                    table.push(q.mul_slow(i, j)?);
                }
            }
            q.mul_table = Some(table);
        }
        Ok(q)
    }

    pub fn ring(&self) -> &Arc<TruncatedRing> {
        &self.ring
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Ring level `M` of the quotient (powers of the matrix ring's uniformizer).
    pub fn level(&self) -> u32 {
        self.ring.level()
    }

    pub fn len(&self) -> usize {
        self.codes.len() / (self.n * self.n)
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn codes(&self, i: u32) -> &[u32] {
        let n2 = self.n * self.n;
        &self.codes[i as usize * n2..(i as usize + 1) * n2]
    }

    pub fn matrix(&self, i: u32) -> Vec<RingElem> {
        self.codes(i)
            .iter()
            .map(|&c| self.ring.from_code(c))
            .collect()
    }

    pub fn index_of(&self, mat: &[RingElem]) -> Option<u32> {
        let key: Box<[u32]> = mat.iter().map(|x| x.code()).collect();
        self.index.get(&key).copied()
    }

    fn mul_slow(&self, i: u32, j: u32) -> Result<u32> {
        let prod = matrix::mul(&self.ring, self.n, &self.matrix(i), &self.matrix(j));
        self.index_of(&prod)
            .ok_or_else(|| Error::Audit("K/K_m table not closed under products".into()))
    }

    pub fn mul(&self, i: u32, j: u32) -> u32 {
        match &self.mul_table {
            Some(t) => t[i as usize * self.len() + j as usize],
            None => self.mul_slow(i, j).expect("closed under products"),
        }
    }

    pub fn inv(&self, i: u32) -> u32 {
        self.inverse[i as usize]
    }

    pub fn write_cache<W: Write>(&self, mut w: W) -> Result<()> {
        let io = |e: std::io::Error| Error::Cache(e.to_string());
        let desc = format!("{:?}", self.ring);
        w.write_all(CACHE_MAGIC).map_err(io)?;
        w.write_all(&CACHE_VERSION.to_le_bytes()).map_err(io)?;
        w.write_all(&(desc.len() as u32).to_le_bytes())
            .map_err(io)?;
        w.write_all(desc.as_bytes()).map_err(io)?;
        let kind = match self.kind {
            FamilyKind::Gl => 0u8,
            FamilyKind::Sl => 1u8,
        };
        w.write_all(&[kind, self.n as u8]).map_err(io)?;
        w.write_all(&(self.len() as u32).to_le_bytes())
            .map_err(io)?;
        for &c in &self.codes {
            w.write_all(&c.to_le_bytes()).map_err(io)?;
        }
        Ok(())
    }

    /// Load a table written by [`write_cache`](Self::write_cache); the header must
    /// match the ring and family exactly and every element is re-validated.
    pub fn read_cache<R: Read>(
        mut r: R,
        ring: Arc<TruncatedRing>,
        kind: FamilyKind,
        n: usize,
    ) -> Result<Self> {
        let io = |e: std::io::Error| Error::Cache(e.to_string());
        let mut u32buf = [0u8; 4];
        let mut read_u32 = |r: &mut R| -> Result<u32> {
            r.read_exact(&mut u32buf).map_err(io)?;
            Ok(u32::from_le_bytes(u32buf))
        };
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(io)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        let version = read_u32(&mut r)?;
        if version != CACHE_VERSION {
            return Err(Error::Cache(format!(
                "cache version {version}, expected {CACHE_VERSION}"
            )));
        }
        let len = read_u32(&mut r)? as usize;
        let mut desc = vec![0u8; len];
        r.read_exact(&mut desc).map_err(io)?;
        if desc != format!("{ring:?}").as_bytes() {
            return Err(Error::Cache("cache was built for a different ring".into()));
        }
        let mut kn = [0u8; 2];
        r.read_exact(&mut kn).map_err(io)?;
        let want_kind = match kind {
            FamilyKind::Gl => 0u8,
            FamilyKind::Sl => 1u8,
        };
        if kn != [want_kind, n as u8] {
            return Err(Error::Cache("cache was built for a different group".into()));
        }
        let count = read_u32(&mut r)? as usize;
        let expected = closed_form_order(kind, n, ring.q(), ring.level());
        if count as u64 != expected {
            return Err(Error::Cache(format!(
                "cache holds {count} elements, expected {expected}"
            )));
        }
        let mut codes = Vec::with_capacity(count * n * n);
        for _ in 0..count * n * n {
            let c = read_u32(&mut r)?;
            if c as u64 >= ring.size() {
                return Err(Error::Cache("entry code out of range".into()));
            }
            codes.push(c);
        }
        for (i, chunk) in codes.chunks(n * n).enumerate() {
            let mat: Vec<RingElem> = chunk.iter().map(|&c| ring.from_code(c)).collect();
            let d = matrix::det(&ring, n, &mat);
            let ok = match kind {
                FamilyKind::Gl => ring.is_unit(d),
                FamilyKind::Sl => d == ring.one(),
            };
            if !ok {
                return Err(Error::Cache(format!(
                    "cached element {i} violates the determinant condition"
                )));
            }
            if i > 0 && codes[(i - 1) * n * n..i * n * n] >= *chunk {
                return Err(Error::Cache(
                    "cached elements are not in canonical order".into(),
                ));
            }
        }
        Self::assemble(ring, kind, n, codes).map_err(|e| Error::Cache(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::FieldDescriptor;

    fn ring(d: FieldDescriptor, l: u32) -> Arc<TruncatedRing> {
        Arc::new(TruncatedRing::new(d, l).unwrap())
    }

    #[test]
    fn orders() {
        let f2 = ring(FieldDescriptor::unramified(2, 1).unwrap(), 1);
        assert_eq!(
            LevelQuotient::enumerate(f2.clone(), FamilyKind::Sl, 2)
                .unwrap()
                .len(),
            6
        );
        let z4 = ring(FieldDescriptor::unramified(2, 1).unwrap(), 2);
        assert_eq!(
            LevelQuotient::enumerate(z4, FamilyKind::Gl, 2)
                .unwrap()
                .len(),
            96
        );
        let f3 = ring(FieldDescriptor::equal(3, 1).unwrap(), 1);
        assert_eq!(
            LevelQuotient::enumerate(f3, FamilyKind::Gl, 1)
                .unwrap()
                .len(),
            2
        );
        let f4 = ring(FieldDescriptor::equal(2, 2).unwrap(), 1);
        assert_eq!(
            LevelQuotient::enumerate(f4, FamilyKind::Sl, 2)
                .unwrap()
                .len(),
            60
        );
        assert_eq!(
            LevelQuotient::enumerate(f2, FamilyKind::Gl, 3)
                .unwrap()
                .len(),
            168
        );
    }

    #[test]
    fn group_axioms_and_lex_order() {
        let r = ring(FieldDescriptor::unramified(3, 1).unwrap(), 1);
        let q = LevelQuotient::enumerate(r, FamilyKind::Sl, 2).unwrap();
        assert_eq!(q.len(), 24);
        for i in 0..q.len() as u32 {
            assert_eq!(q.mul(i, q.inv(i)), q.identity());
            assert_eq!(q.mul(q.identity(), i), i);
            if i > 0 {
                assert!(q.codes(i - 1) < q.codes(i));
            }
        }
    }

    #[test]
    fn cache_round_trip_and_rejection() {
        let r = ring(FieldDescriptor::equal(2, 1).unwrap(), 2);
        let q = LevelQuotient::enumerate(r.clone(), FamilyKind::Sl, 2).unwrap();
        let mut buf = Vec::new();
        q.write_cache(&mut buf).unwrap();
        let back = LevelQuotient::read_cache(&buf[..], r.clone(), FamilyKind::Sl, 2).unwrap();
        assert_eq!(back.codes, q.codes);
        let mut bad = buf.clone();
        bad[4] = 9;
        assert!(matches!(
            LevelQuotient::read_cache(&bad[..], r.clone(), FamilyKind::Sl, 2),
            Err(Error::Cache(_))
        ));
        let mut corrupt = buf.clone();
        let last = corrupt.len() - 4;
        corrupt[last] ^= 1;
        assert!(LevelQuotient::read_cache(&corrupt[..], r.clone(), FamilyKind::Sl, 2).is_err());
        assert!(LevelQuotient::read_cache(&buf[..], r, FamilyKind::Gl, 2).is_err());
    }
}
