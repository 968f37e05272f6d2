//! Exact arithmetic in `O_F / p_F^n`.
//!
//! Elements are stored by a canonical integer code. Mixed characteristic rings
//! are `Σ_{i < min(e,n)} c_i π^i` with `c_i ∈ W(F_q)/p^{⌈(n-i)/e⌉}` written in the
//! basis `1, y, …, y^{f-1}`; equal characteristic rings are `Σ_{i<n} c_i t^i` with
//! `c_i ∈ F_q`. The code is the mixed-radix number whose least significant digit
//! is the `y^0` coefficient of `π^0`, so `Z/p^n` codes are the usual residues.

use std::fmt;
use std::sync::OnceLock;

use super::field::{FieldDescriptor, FieldKind};
use super::RingError;

/// Rings up to this size get full operation tables.
const TABLE_LIMIT: u64 = 2048;
/// Hard cap on ring size so that codes fit comfortably in `u32`.
const SIZE_LIMIT: u64 = 1 << 24;

/// An element of a [`TruncatedRing`]. Carries the ring's fingerprint so that
/// mixing rings is caught.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    tag: u32,
    code: u32,
}

impl RingElem {
    /// Position in the ring's canonical enumeration.
    pub fn code(self) -> u32 {
        self.code
    }

    pub fn ring_tag(self) -> u32 {
        self.tag
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.code)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    val: Vec<u8>,
    inv: Vec<u16>,
    div_pi: Vec<u16>,
    /// `truncate[l][x]`: zero-padded lift of `x mod π^l`.
    truncate: Vec<Vec<u16>>,
}

const NO_VAL: u8 = u8::MAX;
const NO_INV: u16 = u16::MAX;

/// The finite ring `O_F / p_F^n`.
pub struct TruncatedRing {
    desc: FieldDescriptor,
    level: u32,
    tag: u32,
    /// Ramification index used for the slot layout (`None` in equal characteristic).
    e: Option<u32>,
    slots: usize,
    f: usize,
    /// `p^{k_i}` for each flat coordinate `i*f + j`.
    digit_mod: Vec<i64>,
    weights: Vec<u64>,
    size: u64,
    /// Working modulus for products (`p^{k_0}`).
    modulus: i64,
    /// `π^e = Σ relation[i] π^i` in mixed characteristic.
    relation: Vec<i64>,
    p_over_pi: Vec<i64>,
    tables: OnceLock<Option<Tables>>,
}

impl fmt::Debug for TruncatedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod π^{}", self.desc.describe(), self.level)
    }
}

fn fingerprint(desc: &FieldDescriptor, level: u32) -> u32 {
    let mut h: u32 = 0x811c9dc5;
    let mut feed = |x: i64| {
        for b in x.to_le_bytes() {
            h ^= b as u32;
            h = h.wrapping_mul(0x01000193);
        }
    };
    feed(match desc.kind() {
        FieldKind::Mixed => 1,
        FieldKind::Equal => 2,
    });
    feed(desc.p() as i64);
    feed(desc.f() as i64);
    for &c in desc.eisenstein() {
        feed(c);
    }
    feed(level as i64);
    h
}

fn vp(mut x: i64, p: i64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

impl TruncatedRing {
    pub fn new(desc: FieldDescriptor, level: u32) -> Result<Self, RingError> {
        if level == 0 {
            return Err(RingError::InvalidDescriptor(
                "level must be positive".into(),
            ));
        }
        let p = desc.p() as i64;
        let f = desc.f() as usize;
        let e = desc.ramification();
        let (slots, slot_prec): (usize, Vec<u32>) = match e {
            None => (level as usize, vec![1; level as usize]),
            Some(e) => {
                let slots = e.min(level) as usize;
                let prec = (0..slots as u32).map(|i| (level - i).div_ceil(e)).collect();
                (slots, prec)
            }
        };
        let mut digit_mod = Vec::with_capacity(slots * f);
        for &k in &slot_prec {
            for _ in 0..f {
                digit_mod.push(p.pow(k));
            }
        }
        let mut weights = Vec::with_capacity(digit_mod.len());
        let mut size: u64 = 1;
        for &m in &digit_mod {
            weights.push(size);
            size = size.saturating_mul(m as u64);
        }
        if size > SIZE_LIMIT {
            return Err(RingError::TooLarge { size });
        }
        let relation = match e {
            Some(e) => desc.eisenstein()[..e as usize]
                .iter()
                .map(|&a| -a)
                .collect(),
            None => Vec::new(),
        };
        let mut ring = Self {
            tag: fingerprint(&desc, level),
            desc,
            level,
            e,
            slots,
            f,
            digit_mod,
            weights,
            size,
            modulus: p.pow(slot_prec[0]),
            relation,
            p_over_pi: Vec::new(),
            tables: OnceLock::new(),
        };
        if let Some(e) = e {
            // π^e = p·v(π) with v a unit, so p/π = π^{e-1}·v^{-1}.
            let v: Vec<i64> = {
                let mut c = vec![0i64; ring.slots * f];
                for (i, &r) in ring.relation.iter().enumerate() {
                    if i < ring.slots {
                        c[i * f] = r / p;
                    }
                }
                ring.normalize(c)
            };
            let v_inv = ring
                .inverse_coords(&v)
                .expect("eisenstein cofactor is a unit");
            let pi_pow = ring.pi_power_coords(e - 1);
            ring.p_over_pi = ring.mul_coords(&pi_pow, &v_inv);
        }
        Ok(ring)
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn tag(&self) -> u32 {
        self.tag
    }

    pub fn p(&self) -> u32 {
        self.desc.p()
    }

    pub fn q(&self) -> u64 {
        self.desc.q()
    }

    /// `true` iff both rings model the same field at the same level.
    pub fn same_ring(&self, other: &TruncatedRing) -> bool {
        self.tag == other.tag && self.desc == other.desc && self.level == other.level
    }

    fn elem(&self, code: u64) -> RingElem {
        RingElem {
            tag: self.tag,
            code: code as u32,
        }
    }

    pub fn from_code(&self, code: u32) -> RingElem {
        assert!((code as u64) < self.size, "code {code} out of range");
        self.elem(code as u64)
    }

    pub fn contains(&self, x: RingElem) -> bool {
        x.tag == self.tag && (x.code as u64) < self.size
    }

    /// All elements in canonical (code) order.
    pub fn elements(&self) -> impl Iterator<Item = RingElem> + '_ {
        (0..self.size).map(move |c| self.elem(c))
    }

    // ----- coordinate layer -------------------------------------------------

    /// Canonical coordinates: `slots × f` integers, flat index `i*f + j`.
    pub fn coords(&self, x: RingElem) -> Vec<i64> {
        let mut c = x.code as u64;
        self.digit_mod
            .iter()
            .map(|&m| {
                let d = (c % m as u64) as i64;
                c /= m as u64;
                d
            })
            .collect()
    }

    fn encode(&self, c: &[i64]) -> RingElem {
        let code = c
            .iter()
            .zip(&self.weights)
            .zip(&self.digit_mod)
            .map(|((&d, &w), &m)| d.rem_euclid(m) as u64 * w)
            .sum();
        self.elem(code)
    }

    /// Element with the given coordinates (reduced into canonical range).
    pub fn from_coords(&self, c: &[i64]) -> RingElem {
        let mut v = vec![0i64; self.slots * self.f];
        for (dst, &src) in v.iter_mut().zip(c) {
            *dst = src;
        }
        self.encode(&v)
    }

    fn normalize(&self, mut c: Vec<i64>) -> Vec<i64> {
        for (d, &m) in c.iter_mut().zip(&self.digit_mod) {
            *d = d.rem_euclid(m);
        }
        c
    }

    fn pi_power_coords(&self, k: u32) -> Vec<i64> {
        let mut one = vec![0i64; self.slots * self.f];
        one[0] = 1;
        let mut pi = vec![0i64; self.slots * self.f];
        match self.e {
            Some(1) => pi[0] = self.relation[0],
            _ => {
                if self.slots > 1 {
                    pi[self.f] = 1;
                }
            }
        }
        let pi = self.normalize(pi);
        let mut acc = self.normalize(one);
        for _ in 0..k {
            acc = self.mul_coords(&acc, &pi);
        }
        acc
    }

    /// Multiply two polynomials in `y` modulo the residue polynomial and `modulus`.
    fn ymul(&self, a: &[i64], b: &[i64], out: &mut [i64]) {
        let f = self.f;
        let m = self.modulus;
        let mut prod = vec![0i64; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % m;
            }
        }
        let g = self.desc.residue_poly();
        for d in (f..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for t in 0..f {
                prod[d - f + t] = (prod[d - f + t] - c * g[t]) % m;
            }
            prod[d] = 0;
        }
        for (o, &v) in out.iter_mut().zip(&prod) {
            *o = (*o + v) % m;
        }
    }

    fn mul_coords(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let f = self.f;
        let l = self.slots;
        let m = self.modulus;
        let deg = 2 * l - 1;
        let mut acc = vec![0i64; deg * f];
        for i in 0..l {
            let ai = &a[i * f..(i + 1) * f];
            if ai.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..l {
                if self.e.is_none() && i + j >= l {
                    break;
                }
                let bj = &b[j * f..(j + 1) * f];
                self.ymul(ai, bj, &mut acc[(i + j) * f..(i + j + 1) * f]);
            }
        }
        if let Some(e) = self.e {
            let e = e as usize;
            for d in (e..deg).rev() {
                let top: Vec<i64> = acc[d * f..(d + 1) * f].to_vec();
                if top.iter().all(|&x| x == 0) {
                    continue;
                }
                for (i, &r) in self.relation.iter().enumerate() {
                    let r = r % m;
                    if r == 0 {
                        continue;
                    }
                    for (t, &c) in top.iter().enumerate().take(f) {
                        let idx = (d - e + i) * f + t;
                        acc[idx] = (acc[idx] + r * c) % m;
                    }
                }
                for t in 0..f {
                    acc[d * f + t] = 0;
                }
            }
        }
        acc.truncate(l * f);
        self.normalize(acc)
    }

    fn add_coords(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(&self.digit_mod)
            .map(|((&x, &y), &m)| (x + y) % m)
            .collect()
    }

    fn valuation_coords(&self, c: &[i64]) -> Option<u32> {
        let p = self.desc.p() as i64;
        let f = self.f;
        let mut best: Option<u32> = None;
        for i in 0..self.slots {
            let slot = &c[i * f..(i + 1) * f];
            let v = slot.iter().filter_map(|&d| vp(d, p)).min();
            if let Some(v) = v {
                let val = match self.e {
                    Some(e) => e * v + i as u32,
                    None => i as u32,
                };
                best = Some(best.map_or(val, |b: u32| b.min(val)));
                if self.e.is_none() {
                    break;
                }
            }
        }
        best
    }

    fn inverse_coords(&self, x: &[i64]) -> Option<Vec<i64>> {
        if self.valuation_coords(x) != Some(0) {
            return None;
        }
        let p = self.desc.p() as i64;
        let f = self.f;
        let one = {
            let mut o = vec![0i64; self.slots * f];
            o[0] = 1;
            self.normalize(o)
        };
        // residue inverse by search over F_q
        let q = self.desc.q();
        let mut y = None;
        for r in 0..q {
            let mut c = vec![0i64; self.slots * f];
            let mut rr = r as i64;
            for d in c.iter_mut().take(f) {
                *d = rr % p;
                rr /= p;
            }
            let prod = self.mul_coords(x, &c);
            let diff: Vec<i64> = prod.iter().zip(&one).map(|(a, b)| a - b).collect();
            let diff = self.normalize(diff);
            if self.valuation_coords(&diff).is_none_or(|v| v >= 1) {
                y = Some(c);
                break;
            }
        }
        let mut y = y?;
        let two = self.add_coords(&one, &one);
        for _ in 0..64 {
            let xy = self.mul_coords(x, &y);
            if xy == one {
                return Some(y);
            }
            let corr: Vec<i64> = two.iter().zip(&xy).map(|(a, b)| a - b).collect();
            y = self.mul_coords(&y, &self.normalize(corr));
        }
        None
    }

    fn div_pi_coords(&self, x: &[i64]) -> Vec<i64> {
        let f = self.f;
        let mut out = vec![0i64; self.slots * f];
        for i in 1..self.slots {
            out[(i - 1) * f..i * f].copy_from_slice(&x[i * f..(i + 1) * f]);
        }
        if self.e.is_some() {
            let p = self.desc.p() as i64;
            let mut c0 = vec![0i64; self.slots * f];
            for t in 0..f {
                c0[t] = x[t] / p;
            }
            let extra = self.mul_coords(&c0, &self.p_over_pi);
            out = self.add_coords(&self.normalize(out), &extra);
        }
        self.truncate_coords(&self.normalize(out), self.level - 1)
    }

    fn truncate_coords(&self, x: &[i64], l: u32) -> Vec<i64> {
        let p = self.desc.p() as i64;
        let f = self.f;
        x.iter()
            .enumerate()
            .map(|(idx, &d)| {
                let i = (idx / f) as u32;
                let k = match self.e {
                    Some(e) => {
                        if i >= l {
                            0
                        } else {
                            (l - i).div_ceil(e)
                        }
                    }
                    None => u32::from(i < l),
                };
                d.rem_euclid(p.pow(k))
            })
            .collect()
    }

    // ----- tables -----------------------------------------------------------

    fn tables(&self) -> Option<&Tables> {
        self.tables
            .get_or_init(|| {
                if self.size > TABLE_LIMIT {
                    return None;
                }
                let n = self.size as usize;
                let all: Vec<Vec<i64>> = self.elements().map(|x| self.coords(x)).collect();
                let mut add = vec![0u16; n * n];
                let mut mul = vec![0u16; n * n];
                for a in 0..n {
                    for b in a..n {
                        let s = self.encode(&self.add_coords(&all[a], &all[b])).code as u16;
                        let m = self.encode(&self.mul_coords(&all[a], &all[b])).code as u16;
                        add[a * n + b] = s;
                        add[b * n + a] = s;
                        mul[a * n + b] = m;
                        mul[b * n + a] = m;
                    }
                }
                let neg = all
                    .iter()
                    .map(|c| self.encode(&c.iter().map(|&d| -d).collect::<Vec<_>>()).code as u16)
                    .collect();
                let val = all
                    .iter()
                    .map(|c| self.valuation_coords(c).map_or(NO_VAL, |v| v as u8))
                    .collect::<Vec<u8>>();
                let inv = all
                    .iter()
                    .map(|c| {
                        self.inverse_coords(c)
                            .map_or(NO_INV, |y| self.encode(&y).code as u16)
                    })
                    .collect();
                let div_pi = all
                    .iter()
                    .zip(&val)
                    .map(|(c, &v)| {
                        if v == 0 {
                            0
                        } else {
                            self.encode(&self.div_pi_coords(c)).code as u16
                        }
                    })
                    .collect();
                let truncate = (0..=self.level)
                    .map(|l| {
                        all.iter()
                            .map(|c| self.encode(&self.truncate_coords(c, l)).code as u16)
                            .collect()
                    })
                    .collect();
                Some(Tables {
                    add,
                    mul,
                    neg,
                    val,
                    inv,
                    div_pi,
                    truncate,
                })
            })
            .as_ref()
    }

    /// Force (or skip) table construction; returns whether tables are in use.
    pub fn has_tables(&self) -> bool {
        self.tables().is_some()
    }

    // ----- element API ------------------------------------------------------

    #[inline]
    fn check(&self, x: RingElem) {
        debug_assert_eq!(x.tag, self.tag, "element from a different ring");
    }

    pub fn zero(&self) -> RingElem {
        self.elem(0)
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> RingElem {
        let mut c = vec![0i64; self.slots * self.f];
        c[0] = n;
        self.encode(&c)
    }

    /// Class of the uniformizer.
    pub fn pi(&self) -> RingElem {
        self.encode(&self.pi_power_coords(1))
    }

    pub fn pi_pow(&self, k: u32) -> RingElem {
        if k >= self.level {
            return self.zero();
        }
        self.encode(&self.pi_power_coords(k))
    }

    /// The residue-field generator `y` (zero when `f = 1`).
    pub fn residue_generator(&self) -> RingElem {
        let mut c = vec![0i64; self.slots * self.f];
        if self.f > 1 {
            c[1] = 1;
        }
        self.encode(&c)
    }

    #[inline]
    pub fn add(&self, x: RingElem, y: RingElem) -> RingElem {
        self.check(x);
        self.check(y);
        match self.tables() {
            Some(t) => {
                self.elem(t.add[x.code as usize * self.size as usize + y.code as usize] as u64)
            }
            None => self.encode(&self.add_coords(&self.coords(x), &self.coords(y))),
        }
    }

    #[inline]
    pub fn neg(&self, x: RingElem) -> RingElem {
        self.check(x);
        match self.tables() {
            Some(t) => self.elem(t.neg[x.code as usize] as u64),
            None => self.encode(&self.coords(x).iter().map(|&d| -d).collect::<Vec<_>>()),
        }
    }

    #[inline]
    pub fn sub(&self, x: RingElem, y: RingElem) -> RingElem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: RingElem, y: RingElem) -> RingElem {
        self.check(x);
        self.check(y);
        match self.tables() {
            Some(t) => {
                self.elem(t.mul[x.code as usize * self.size as usize + y.code as usize] as u64)
            }
            None => self.encode(&self.mul_coords(&self.coords(x), &self.coords(y))),
        }
    }

    pub fn pow(&self, x: RingElem, mut k: u32) -> RingElem {
        let mut acc = self.one();
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Checked ring operation: rejects operands from another ring.
    pub fn ring_arith(&self, op: RingOp, x: RingElem, y: RingElem) -> Result<RingElem, RingError> {
        if !self.contains(x) || !self.contains(y) {
            return Err(RingError::Mismatch);
        }
        Ok(match op {
            RingOp::Add => self.add(x, y),
            RingOp::Sub => self.sub(x, y),
            RingOp::Mul => self.mul(x, y),
        })
    }

    /// Largest `k < n` with `x ∈ π^k O`; `None` stands for "≥ n", i.e. `x = 0`.
    #[inline]
    pub fn valuation(&self, x: RingElem) -> Option<u32> {
        self.check(x);
        match self.tables() {
            Some(t) => match t.val[x.code as usize] {
                NO_VAL => None,
                v => Some(v as u32),
            },
            None => self.valuation_coords(&self.coords(x)),
        }
    }

    pub fn is_unit(&self, x: RingElem) -> bool {
        self.valuation(x) == Some(0)
    }

    pub fn inverse(&self, x: RingElem) -> Result<RingElem, RingError> {
        self.check(x);
        let r = match self.tables() {
            Some(t) => match t.inv[x.code as usize] {
                NO_INV => None,
                y => Some(self.elem(y as u64)),
            },
            None => self
                .inverse_coords(&self.coords(x))
                .map(|c| self.encode(&c)),
        };
        r.ok_or(RingError::NotUnit)
    }

    /// `x / π^k` for `valuation(x) ≥ k`. The quotient is only defined modulo
    /// `π^{n-k}`; the zero-padded representative is returned.
    pub fn div_pi_pow(&self, x: RingElem, k: u32) -> Result<RingElem, RingError> {
        self.check(x);
        if k == 0 {
            return Ok(x);
        }
        if k > self.level || self.valuation(x).is_some_and(|v| v < k) {
            return Err(RingError::NotDivisible);
        }
        let mut cur = x;
        for _ in 0..k {
            cur = match self.tables() {
                Some(t) => self.elem(t.div_pi[cur.code as usize] as u64),
                None => self.encode(&self.div_pi_coords(&self.coords(cur))),
            };
        }
        Ok(cur)
    }

    /// Zero-padded lift of `x mod π^l` back into this ring.
    #[inline]
    pub fn truncate(&self, x: RingElem, l: u32) -> RingElem {
        self.check(x);
        if l >= self.level {
            return x;
        }
        match self.tables() {
            Some(t) => self.elem(t.truncate[l as usize][x.code as usize] as u64),
            None => self.encode(&self.truncate_coords(&self.coords(x), l)),
        }
    }

    /// `true` iff `x ≡ y mod π^l`.
    pub fn congruent(&self, x: RingElem, y: RingElem, l: u32) -> bool {
        self.valuation(self.sub(x, y)).is_none_or(|v| v >= l)
    }

    /// Canonical surjection into the same field at a lower level.
    pub fn reduce_to(&self, target: &TruncatedRing, x: RingElem) -> Result<RingElem, RingError> {
        self.check_same_field(target)?;
        if target.level > self.level {
            return Err(RingError::LevelOrder);
        }
        Ok(self.transport_coords(target, x))
    }

    /// Zero-padding section into the same field at a higher level.
    pub fn lift_to(&self, target: &TruncatedRing, x: RingElem) -> Result<RingElem, RingError> {
        self.check_same_field(target)?;
        if target.level < self.level {
            return Err(RingError::LevelOrder);
        }
        Ok(self.transport_coords(target, x))
    }

    fn check_same_field(&self, target: &TruncatedRing) -> Result<(), RingError> {
        if self.desc != target.desc {
            return Err(RingError::Mismatch);
        }
        Ok(())
    }

    fn transport_coords(&self, target: &TruncatedRing, x: RingElem) -> RingElem {
        let c = self.coords(x);
        let n = target.slots * target.f;
        let mut out = vec![0i64; n];
        for (o, &d) in out.iter_mut().zip(&c) {
            *o = d;
        }
        target.encode(&out)
    }

    /// Human-readable polynomial in the uniformizer.
    pub fn format(&self, x: RingElem) -> String {
        let c = self.coords(x);
        let f = self.f;
        let var = match self.desc.kind() {
            FieldKind::Mixed => "π",
            FieldKind::Equal => "t",
        };
        if self.desc.kind() == FieldKind::Mixed && self.e == Some(1) && f == 1 {
            return c[0].to_string();
        }
        let mut terms = Vec::new();
        for i in 0..self.slots {
            let slot = &c[i * f..(i + 1) * f];
            if slot.iter().all(|&d| d == 0) {
                continue;
            }
            let coeff = if f == 1 {
                slot[0].to_string()
            } else {
                let parts: Vec<String> = slot
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d != 0)
                    .map(|(j, &d)| match (j, d) {
                        (0, d) => d.to_string(),
                        (1, 1) => "y".into(),
                        (1, d) => format!("{d}y"),
                        (j, 1) => format!("y^{j}"),
                        (j, d) => format!("{d}y^{j}"),
                    })
                    .collect();
                if parts.len() == 1 {
                    parts[0].clone()
                } else {
                    format!("({})", parts.join("+"))
                }
            };
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(match (i, coeff.as_str()) {
                (0, _) => coeff,
                (_, "1") => mono,
                _ => format!("{coeff}{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}
