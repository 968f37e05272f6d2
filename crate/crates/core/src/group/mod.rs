//! Elements of `G(F)` at working precision, the subgroups `K ⊃ K_m`, the finite
//! quotients `K/K_m`, and the Iwahori factorization of `K_m`.
//!
//! Every element is stored as `g = π^{-d}·M` with `M` a primitive integral matrix
//! whose entries are known modulo `π^prec`. Here `π` is the uniformizer of the
//! matrix ring: `O_F` for split families and `O_E` for `Res_{E/F}` families, so
//! all levels below are counted in powers of that uniformizer.

pub mod matrix;
mod quotient;

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;

pub use quotient::{closed_form_order, LevelQuotient, CACHE_MAGIC, CACHE_VERSION, QUOTIENT_GUARD};

use crate::error::{Error, Result};
use crate::residue::{FieldDescriptor, FieldKind, RingElem, TruncatedRing};
use crate::root_datum::{BasedRootDatum, Cocharacter, FamilyKind};

/// Cap on `|K_m/K_c|` enumerations.
pub const KM_GUARD: u64 = 2_000_000;

/// Which group: `GL_n`/`SL_n` over a field, or its Weil restriction from the
/// prime subfield of a finite extension `E`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    kind: FamilyKind,
    n: usize,
    field: FieldDescriptor,
    restriction: Option<(u32, u32)>,
}

impl GroupSpec {
    pub fn split(kind: FamilyKind, n: usize, field: FieldDescriptor) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::Invalid(format!("rank {n} unsupported (1..=3)")));
        }
        if kind == FamilyKind::Sl && n < 2 {
            return Err(Error::Invalid("SL_1 is trivial".into()));
        }
        Ok(Self {
            kind,
            n,
            field,
            restriction: None,
        })
    }

    /// `Res_{E/F} GL_n` / `SL_n` with `F` the prime field `Q_p` or `F_p((t))`.
    ///
    /// In mixed characteristic `e(E/F)` is the degree of `E`'s Eisenstein
    /// polynomial; in equal characteristic `E = F_q((s))` and `F = F_p((s^e))`
    /// with `e = ramification`.
    pub fn restriction(
        kind: FamilyKind,
        n: usize,
        ext: FieldDescriptor,
        ramification: Option<u32>,
    ) -> Result<Self> {
        let mut spec = Self::split(kind, n, ext)?;
        let e = match (spec.field.kind(), ramification) {
            (FieldKind::Mixed, None) => spec.field.ramification().unwrap(),
            (FieldKind::Mixed, Some(e)) if Some(e) == spec.field.ramification() => e,
            (FieldKind::Mixed, Some(e)) => {
                return Err(Error::Invalid(format!(
                    "ramification {e} disagrees with the Eisenstein polynomial of E"
                )))
            }
            (FieldKind::Equal, Some(e)) if e >= 1 => e,
            (FieldKind::Equal, _) => {
                return Err(Error::Invalid(
                    "equal characteristic restriction needs its ramification index".into(),
                ))
            }
        };
        spec.restriction = Some((e, spec.field.f()));
        Ok(spec)
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Field of the matrix entries (`F`, or `E` for a restriction).
    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn is_restriction(&self) -> bool {
        self.restriction.is_some()
    }

    /// `e(E/F)`; 1 for split families.
    pub fn rel_e(&self) -> u32 {
        self.restriction.map_or(1, |r| r.0)
    }

    /// `f(E/F)`; 1 for split families.
    pub fn rel_f(&self) -> u32 {
        self.restriction.map_or(1, |r| r.1)
    }

    /// Residue field size of the base field `F`.
    pub fn base_q(&self) -> u64 {
        match self.restriction {
            Some(_) => self.field.p() as u64,
            None => self.field.q(),
        }
    }

    pub fn datum(&self) -> BasedRootDatum {
        BasedRootDatum::decorated(self.kind, self.n, self.rel_e(), self.rel_f())
    }

    pub fn name(&self) -> String {
        let g = match self.kind {
            FamilyKind::Gl => "GL",
            FamilyKind::Sl => "SL",
        };
        match self.restriction {
            None => format!("{g}_{} over {}", self.n, self.field.describe()),
            Some((e, f)) => {
                let base = match self.field.kind() {
                    FieldKind::Mixed => format!("Q_{}", self.field.p()),
                    FieldKind::Equal if e == 1 => format!("F_{}((s))", self.field.p()),
                    FieldKind::Equal => format!("F_{}((s^{e}))", self.field.p()),
                };
                format!(
                    "Res_{{E/F}} {g}_{} with E = {}, F = {base} (e={e}, f={f})",
                    self.n,
                    self.field.describe()
                )
            }
        }
    }
}

/// `g = π^{-shift}·mat` with `mat` primitive and known modulo `π^prec`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElem {
    shift: i32,
    prec: u32,
    mat: Vec<RingElem>,
}

impl GroupElem {
    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn entries(&self) -> &[RingElem] {
        &self.mat
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "π^{}·{:?} (mod π^{})", -self.shift, self.mat, self.prec)
    }
}

/// A family at a fixed congruence level `m` and working ring level `N`.
pub struct GroupModel {
    spec: GroupSpec,
    m: u32,
    ring: Arc<TruncatedRing>,
    qring: Arc<TruncatedRing>,
    datum: BasedRootDatum,
    quotient: OnceLock<Arc<LevelQuotient>>,
}

impl fmt::Debug for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupModel({}, m={}, working level {})",
            self.spec.name(),
            self.m,
            self.ring.level()
        )
    }
}

impl GroupModel {
    /// `m` is the congruence level over `F`; `working_level` is the ring level `N`
    /// of the matrix entries, which must exceed `e(E/F)·m`.
    pub fn new(spec: GroupSpec, m: u32, working_level: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("congruence level must be at least 1".into()));
        }
        let km = spec.rel_e() * m;
        if working_level < km {
            return Err(Error::Invalid(format!(
                "working level {working_level} below K_m level {km}"
            )));
        }
        let ring = Arc::new(TruncatedRing::new(spec.field.clone(), working_level)?);
        let qring = Arc::new(TruncatedRing::new(spec.field.clone(), km)?);
        let datum = spec.datum();
        Ok(Self {
            spec,
            m,
            ring,
            qring,
            datum,
            quotient: OnceLock::new(),
        })
    }

    /// Default working level able to handle products of cosets whose Cartan
    /// invariants have spread at most `max_spread`.
    pub fn for_spread(spec: GroupSpec, m: u32, max_spread: u32) -> Result<Self> {
        let level = working_level(&spec, m, max_spread);
        Self::new(spec, m, level)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn kind(&self) -> FamilyKind {
        self.spec.kind
    }

    pub fn datum(&self) -> &BasedRootDatum {
        &self.datum
    }

    pub fn ring(&self) -> &Arc<TruncatedRing> {
        &self.ring
    }

    pub fn quotient_ring(&self) -> &Arc<TruncatedRing> {
        &self.qring
    }

    /// Congruence level `m` over `F`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Ring level of `K_m`, i.e. `e(E/F)·m`.
    pub fn km_level(&self) -> u32 {
        self.qring.level()
    }

    pub fn working_level(&self) -> u32 {
        self.ring.level()
    }

    pub fn quotient(&self) -> Result<&Arc<LevelQuotient>> {
        if let Some(q) = self.quotient.get() {
            return Ok(q);
        }
        let q = Arc::new(LevelQuotient::enumerate(
            self.qring.clone(),
            self.kind(),
            self.n(),
        )?);
        let _ = self.quotient.set(q);
        Ok(self.quotient.get().expect("just set"))
    }

    /// Install a prebuilt (e.g. cached) quotient table.
    pub fn set_quotient(&self, q: Arc<LevelQuotient>) -> Result<()> {
        if !q.ring().same_ring(&self.qring) || q.kind() != self.kind() || q.n() != self.n() {
            return Err(Error::Cache(
                "quotient table does not match this group".into(),
            ));
        }
        self.quotient
            .set(q)
            .map_err(|_| Error::Cache("quotient already built".into()))
    }

    // ----- construction ------------------------------------------------------

    fn normalize(&self, shift: i32, prec: u32, mat: Vec<RingElem>) -> Result<GroupElem> {
        let r = &*self.ring;
        let prec = prec.min(r.level());
        if prec == 0 {
            return Err(Error::precision("no significant digits left"));
        }
        let mut mat: Vec<RingElem> = mat.into_iter().map(|x| r.truncate(x, prec)).collect();
        let k = matrix::min_valuation(r, &mat)
            .ok_or_else(|| Error::precision(format!("all entries vanish modulo π^{prec}")))?;
        if k == 0 {
            return Ok(GroupElem { shift, prec, mat });
        }
        let prec = prec - k;
        for x in mat.iter_mut() {
            *x = r.truncate(r.div_pi_pow(*x, k)?, prec);
        }
        Ok(GroupElem {
            shift: shift - k as i32,
            prec,
            mat,
        })
    }

    /// `π^{-shift}·entries` with entries known to full working precision.
    pub fn from_entries(&self, shift: i32, entries: Vec<RingElem>) -> Result<GroupElem> {
        if entries.len() != self.n() * self.n() || entries.iter().any(|&x| !self.ring.contains(x)) {
            return Err(Error::Invalid("matrix shape or ring mismatch".into()));
        }
        let g = self.normalize(shift, self.ring.level(), entries)?;
        self.det_valuation(&g)?;
        Ok(g)
    }

    pub fn from_ints(&self, shift: i32, entries: &[i64]) -> Result<GroupElem> {
        self.from_entries(
            shift,
            entries.iter().map(|&x| self.ring.from_int(x)).collect(),
        )
    }

    pub fn identity(&self) -> GroupElem {
        GroupElem {
            shift: 0,
            prec: self.ring.level(),
            mat: matrix::identity(&self.ring, self.n()),
        }
    }

    /// `π_λ = diag(π^{λ_1}, …, π^{λ_n})`.
    pub fn pi_lambda(&self, lambda: &Cocharacter) -> Result<GroupElem> {
        if !self.datum.in_lattice(lambda) {
            return Err(Error::Invalid(format!(
                "{lambda} is not in the cocharacter lattice"
            )));
        }
        let lo = *lambda.0.iter().min().expect("nonempty");
        if lambda.spread() >= self.ring.level() as i64 {
            return Err(Error::precision(format!(
                "π_λ for λ = {lambda} needs level above {}",
                lambda.spread()
            )));
        }
        let n = self.n();
        let mut mat = vec![self.ring.zero(); n * n];
        for (i, &l) in lambda.0.iter().enumerate() {
            mat[i * n + i] = self.ring.pi_pow((l - lo) as u32);
        }
        self.normalize(-lo as i32, self.ring.level(), mat)
    }

    /// The unit `w` with `π_F = π^{e}·w` (1 for split families).
    pub fn base_uniformizer_unit(&self) -> Result<RingElem> {
        let r = &*self.ring;
        if !self.spec.is_restriction() || self.spec.field.kind() == FieldKind::Equal {
            return Ok(r.one());
        }
        let e = self.spec.rel_e();
        let w = r.div_pi_pow(r.from_int(self.spec.field.p() as i64), e)?;
        if !r.is_unit(w) {
            return Err(Error::precision("working level too small to see p/π^e"));
        }
        Ok(w)
    }

    /// `μ(π_F)` for an `F`-rational cocharacter `μ`; equals `π_{e·μ}` times a
    /// diagonal element of `K`.
    pub fn pi_f_rational(&self, mu: &Cocharacter) -> Result<GroupElem> {
        let e = self.spec.rel_e() as i64;
        let base = self.pi_lambda(&mu.scale(e))?;
        let w = self.base_uniformizer_unit()?;
        let r = &*self.ring;
        let winv = r.inverse(w)?;
        let n = self.n();
        let mut t = matrix::identity(r, n);
        for (i, &k) in mu.0.iter().enumerate() {
            t[i * n + i] = if k >= 0 {
                r.pow(w, k as u32)
            } else {
                r.pow(winv, (-k) as u32)
            };
        }
        let known = self.ring.level()
            - if self.spec.field.kind() == FieldKind::Mixed {
                self.spec.rel_e()
            } else {
                0
            };
        self.mul(&base, &self.normalize(0, known, t)?)
    }

    // ----- arithmetic --------------------------------------------------------

    pub fn mul(&self, g: &GroupElem, h: &GroupElem) -> Result<GroupElem> {
        let prod = matrix::mul(&self.ring, self.n(), &g.mat, &h.mat);
        self.normalize(g.shift + h.shift, g.prec.min(h.prec), prod)
    }

    /// `g` with its precision lowered to at most `prec`.
    pub fn limit_precision(&self, g: &GroupElem, prec: u32) -> Result<GroupElem> {
        self.normalize(g.shift, prec.min(g.prec), g.mat.clone())
    }

    /// Whether `g` and `h` agree to the smaller of their precisions.
    pub fn agree(&self, g: &GroupElem, h: &GroupElem) -> bool {
        let p = g.prec.min(h.prec);
        g.shift == h.shift
            && g.mat
                .iter()
                .zip(&h.mat)
                .all(|(&x, &y)| self.ring.congruent(x, y, p))
    }

    pub fn mul_all(&self, factors: &[&GroupElem]) -> Result<GroupElem> {
        let mut acc = self.identity();
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    /// `(v(det M), det M)`, with the valuation certified at the element's precision.
    fn det_valuation(&self, g: &GroupElem) -> Result<(u32, RingElem)> {
        let r = &*self.ring;
        let d = r.truncate(matrix::det(r, self.n(), &g.mat), g.prec);
        match r.valuation(d) {
            Some(v) if v < g.prec => Ok((v, d)),
            _ => Err(Error::precision("determinant valuation not certified")),
        }
    }

    pub fn inv(&self, g: &GroupElem) -> Result<GroupElem> {
        let r = &*self.ring;
        let (v, d) = self.det_valuation(g)?;
        let u = r.div_pi_pow(d, v)?;
        let uinv = r.inverse(u)?;
        let adj = matrix::adjugate(r, self.n(), &g.mat);
        self.normalize(v as i32 - g.shift, g.prec - v, matrix::scale(r, &adj, uinv))
    }

    /// Valuation of `det g` (in powers of `π`).
    pub fn det_order(&self, g: &GroupElem) -> Result<i64> {
        let (v, _) = self.det_valuation(g)?;
        Ok(v as i64 - self.n() as i64 * g.shift as i64)
    }

    // ----- membership --------------------------------------------------------

    pub fn in_k(&self, g: &GroupElem) -> Result<bool> {
        if g.shift != 0 {
            return Ok(false);
        }
        let (v, d) = self.det_valuation(g)?;
        Ok(v == 0
            && match self.kind() {
                FamilyKind::Gl => true,
                FamilyKind::Sl => self.ring.congruent(d, self.ring.one(), g.prec),
            })
    }

    pub fn in_km(&self, g: &GroupElem) -> Result<bool> {
        if !self.in_k(g)? {
            return Ok(false);
        }
        let level = self.km_level();
        if g.prec < level {
            return Err(Error::precision(format!(
                "K_m membership needs level {level}, have {}",
                g.prec
            )));
        }
        let id = matrix::identity(&self.ring, self.n());
        Ok(g.mat
            .iter()
            .zip(&id)
            .all(|(&x, &y)| self.ring.congruent(x, y, level)))
    }

    /// Index of `g K_m` in the quotient table, for `g ∈ K`.
    pub fn reduce_index(&self, g: &GroupElem) -> Result<u32> {
        if !self.in_k(g)? {
            return Err(Error::Invalid("element is not in K".into()));
        }
        if g.prec < self.km_level() {
            return Err(Error::precision("reduction to K/K_m needs more digits"));
        }
        let red: Vec<RingElem> = g
            .mat
            .iter()
            .map(|&x| self.ring.reduce_to(&self.qring, x))
            .collect::<Result<_, _>>()?;
        self.quotient()?
            .index_of(&red)
            .ok_or_else(|| Error::precision("reduction is not in the K/K_m table"))
    }

    /// A lift to `K` of the quotient element with index `i`.
    pub fn lift(&self, i: u32) -> Result<GroupElem> {
        let q = self.quotient()?;
        let r = &*self.ring;
        let mut mat: Vec<RingElem> = q
            .matrix(i)
            .into_iter()
            .map(|x| self.qring.lift_to(r, x))
            .collect::<Result<_, _>>()?;
        if self.kind() == FamilyKind::Sl {
            self.fix_det_row0(&mut mat)?;
        }
        Ok(GroupElem {
            shift: 0,
            prec: r.level(),
            mat,
        })
    }

    fn fix_det_row0(&self, mat: &mut [RingElem]) -> Result<()> {
        let r = &*self.ring;
        let dinv = r.inverse(matrix::det(r, self.n(), mat))?;
        for x in mat.iter_mut().take(self.n()) {
            *x = r.mul(*x, dinv);
        }
        Ok(())
    }

    // ----- Iwahori factorization and K_m/K_c --------------------------------

    /// `g = u⁺·t·u⁻` for `g ∈ K_m`.
    pub fn iwahori_factor(&self, g: &GroupElem) -> Result<(GroupElem, GroupElem, GroupElem)> {
        if !self.in_km(g)? {
            return Err(Error::NotInKm);
        }
        let r = &*self.ring;
        let n = self.n();
        let mut a = g.mat.clone();
        let mut upper = matrix::identity(r, n);
        let mut lower = matrix::identity(r, n);
        let mut torus = vec![r.zero(); n * n];
        for k in (0..n).rev() {
            let t = a[k * n + k];
            let tinv = r.inverse(t)?;
            torus[k * n + k] = t;
            for i in 0..k {
                upper[i * n + k] = r.mul(a[i * n + k], tinv);
                lower[k * n + i] = r.mul(tinv, a[k * n + i]);
            }
            for i in 0..k {
                for j in 0..k {
                    let corr = r.mul(upper[i * n + k], a[k * n + j]);
                    a[i * n + j] = r.sub(a[i * n + j], corr);
                }
            }
        }
        let mk = |mat: Vec<RingElem>| GroupElem {
            shift: 0,
            prec: g.prec,
            mat,
        };
        let trunc = |mat: Vec<RingElem>| mat.into_iter().map(|x| r.truncate(x, g.prec)).collect();
        Ok((mk(trunc(upper)), mk(trunc(torus)), mk(trunc(lower))))
    }

    /// Representatives `π^{M}·r` of `π^M O / π^C O`, zero-padded.
    fn congruence_offsets(&self, c: u32) -> Result<Vec<RingElem>> {
        let mlev = self.km_level();
        if c < mlev || c > self.ring.level() {
            return Err(Error::Invalid(format!(
                "level {c} outside [{mlev}, {}]",
                self.ring.level()
            )));
        }
        if c == mlev {
            return Ok(vec![self.ring.zero()]);
        }
        let small = TruncatedRing::new(self.spec.field.clone(), c - mlev)?;
        let pm = self.ring.pi_pow(mlev);
        small
            .elements()
            .map(|x| Ok(self.ring.mul(pm, small.lift_to(&self.ring, x)?)))
            .collect()
    }

    /// Number of elements of `K_m/K_c` (`c` a ring level).
    pub fn km_quotient_size(&self, c: u32) -> u64 {
        let per = self
            .spec
            .field
            .q()
            .saturating_pow(c.saturating_sub(self.km_level()));
        let n = self.n() as u32;
        let dim = match self.kind() {
            FamilyKind::Gl => n * n,
            FamilyKind::Sl => n * n - 1,
        };
        per.saturating_pow(dim)
    }

    /// All of `K_m/K_c` as products `u⁺·t·u⁻` of lifted congruence parameters
    /// (`c` a ring level, at most the working level).
    pub fn km_quotient(&self, c: u32) -> Result<Vec<GroupElem>> {
        let size = self.km_quotient_size(c);
        if size > KM_GUARD {
            return Err(Error::guard("K_m/K_c enumeration", size, KM_GUARD));
        }
        let offsets = self.congruence_offsets(c)?;
        let r = &*self.ring;
        let n = self.n();
        let off_slots = n * (n - 1);
        let torus_slots = match self.kind() {
            FamilyKind::Gl => n,
            FamilyKind::Sl => n - 1,
        };
        let slots = off_slots + torus_slots;
        let mut digits = vec![0usize; slots];
        let mut out = Vec::with_capacity(size as usize);
        loop {
            let mut upper = matrix::identity(r, n);
            let mut lower = matrix::identity(r, n);
            let mut torus = matrix::identity(r, n);
            let mut s = 0;
            for i in 0..n {
                for j in 0..n {
                    if i < j {
                        upper[i * n + j] = offsets[digits[s]];
                        s += 1;
                    } else if i > j {
                        lower[i * n + j] = offsets[digits[s]];
                        s += 1;
                    }
                }
            }
            let mut prod = r.one();
            for i in 0..torus_slots {
                let t = r.add(r.one(), offsets[digits[off_slots + i]]);
                torus[i * n + i] = t;
                prod = r.mul(prod, t);
            }
            if torus_slots < n {
                torus[(n - 1) * n + n - 1] = r.inverse(prod)?;
            }
            let m = matrix::mul(r, n, &matrix::mul(r, n, &upper, &torus), &lower);
            out.push(GroupElem {
                shift: 0,
                prec: r.level(),
                mat: m,
            });
            let mut pos = slots;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < offsets.len() {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    // ----- sampling ----------------------------------------------------------

    /// A uniformly random element of `K` at working precision.
    pub fn random_k<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<GroupElem> {
        let r = &*self.ring;
        let n = self.n();
        loop {
            let mut mat: Vec<RingElem> = (0..n * n)
                .map(|_| r.from_code(rng.gen_range(0..r.size()) as u32))
                .collect();
            if !r.is_unit(matrix::det(r, n, &mat)) {
                continue;
            }
            if self.kind() == FamilyKind::Sl {
                self.fix_det_row0(&mut mat)?;
            }
            return Ok(GroupElem {
                shift: 0,
                prec: r.level(),
                mat,
            });
        }
    }

    /// A random element of `K_m` at working precision.
    pub fn random_km<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<GroupElem> {
        let r = &*self.ring;
        let n = self.n();
        let pm = r.pi_pow(self.km_level());
        let mut mat = matrix::identity(r, n);
        for x in mat.iter_mut() {
            let noise = r.mul(pm, r.from_code(rng.gen_range(0..r.size()) as u32));
            *x = r.add(*x, noise);
        }
        if self.kind() == FamilyKind::Sl {
            self.fix_det_row0(&mut mat)?;
        }
        Ok(GroupElem {
            shift: 0,
            prec: r.level(),
            mat,
        })
    }

    pub fn format(&self, g: &GroupElem) -> String {
        let n = self.n();
        let rows: Vec<String> = (0..n)
            .map(|i| {
                let row: Vec<String> = (0..n).map(|j| self.ring.format(g.mat[i * n + j])).collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        let body = format!("[{}]", rows.join(", "));
        if g.shift == 0 {
            body
        } else {
            format!("π^{}·{body}", -g.shift)
        }
    }
}

/// Working ring level for products of two cosets whose invariants have spread
/// at most `max_spread` (ring units).
pub fn working_level(spec: &GroupSpec, m: u32, max_spread: u32) -> u32 {
    spec.rel_e() * m + 3 * max_spread + 1
}
