//! Cartan invariants, `K_m`-double cosets and their canonical labels.
//!
//! A double coset `K_m·a·π_λ·b^{-1}·K_m` with `a, b ∈ K` depends only on the
//! classes `(ā, b̄) ∈ (K/K_m)^2`, and two pairs give the same double coset exactly
//! when they differ by right multiplication by the stabilizer `Γ_λ`. Labels are
//! the lexicographically smallest pair of each `Γ_λ`-orbit.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElem, GroupModel};
use crate::residue::RingElem;
use crate::root_datum::{BasedRootDatum, Cocharacter, FamilyKind};

/// Largest `|K/K_m|` for which stabilizers and labels are computed.
pub const QUOTIENT_LABEL_GUARD: u64 = 10_000;
/// Largest number of pairs `(ā, b̄)` scanned by a census.
pub const PAIR_GUARD: u64 = 10_000_000;

/// `λ` together with a canonical pair `(a, b)` of quotient indices, labelling
/// `K_m·a·π_λ·b^{-1}·K_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DoubleCosetId {
    pub lambda: Cocharacter,
    pub a: u32,
    pub b: u32,
}

impl std::fmt::Display for DoubleCosetId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}[{},{}]", self.lambda, self.a, self.b)
    }
}

/// `g = a·π_λ·b` with `a, b ∈ K`.
#[derive(Clone, Debug)]
pub struct CartanWitness {
    pub a: GroupElem,
    pub lambda: Cocharacter,
    pub b: GroupElem,
}

/// Smith normal form over the DVR with `K`-witnesses. Pivots are chosen by
/// smallest valuation and then smallest position, so the diagonal comes out
/// ascending and `λ` is antidominant without sorting.
pub fn cartan_decompose(model: &GroupModel, g: &GroupElem) -> Result<CartanWitness> {
    let r = &**model.ring();
    let n = model.n();
    let prec = g.precision();
    let mut m: Vec<RingElem> = g.entries().to_vec();
    let mut left = crate::group::matrix::identity(r, n);
    let mut right = crate::group::matrix::identity(r, n);
    let mut nu = vec![0i64; n];
    for k in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if let Some(v) = r.valuation(m[i * n + j]) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (v, pi, pj) = match best {
            Some(b) if b.0 < prec => b,
            _ => {
                return Err(Error::precision(format!(
                    "Smith pivot {k} not certified at level {prec}"
                )))
            }
        };
        if pi != k {
            for j in 0..n {
                m.swap(k * n + j, pi * n + j);
                left.swap(j * n + k, j * n + pi);
            }
        }
        if pj != k {
            for i in 0..n {
                m.swap(i * n + k, i * n + pj);
                right.swap(k * n + i, pj * n + i);
            }
        }
        let pivot = m[k * n + k];
        let u = r.div_pi_pow(pivot, v)?;
        let uinv = r.inverse(u)?;
        for i in k + 1..n {
            let c = r.mul(r.div_pi_pow(m[i * n + k], v)?, uinv);
            if c == r.zero() {
                continue;
            }
            for j in k..n {
                m[i * n + j] = r.sub(m[i * n + j], r.mul(c, m[k * n + j]));
            }
            for row in 0..n {
                left[row * n + k] = r.add(left[row * n + k], r.mul(c, left[row * n + i]));
            }
        }
        for j in k + 1..n {
            let c = r.mul(r.div_pi_pow(m[k * n + j], v)?, uinv);
            if c == r.zero() {
                continue;
            }
            for i in k..n {
                m[i * n + j] = r.sub(m[i * n + j], r.mul(c, m[i * n + k]));
            }
            for col in 0..n {
                right[k * n + col] = r.add(right[k * n + col], r.mul(c, right[j * n + col]));
            }
        }
        for row in 0..n {
            left[row * n + k] = r.mul(left[row * n + k], u);
        }
        nu[k] = v as i64;
    }
    let lambda = Cocharacter(nu.iter().map(|&x| x - g.shift() as i64).collect());
    let spread = lambda.spread() as u32;
    if prec < model.km_level() + spread {
        return Err(Error::precision(format!(
            "need level {} to label a coset of spread {spread}, have {prec}",
            model.km_level() + spread
        )));
    }
    if model.kind() == FamilyKind::Sl {
        let det = crate::group::matrix::det(r, n, &left);
        let dinv = r.inverse(det)?;
        for row in 0..n {
            left[row * n + n - 1] = r.mul(left[row * n + n - 1], dinv);
        }
        for col in 0..n {
            right[(n - 1) * n + col] = r.mul(right[(n - 1) * n + col], det);
        }
    }
    let witness_prec = prec - spread;
    let a = model.from_entries(0, left)?;
    let b = model.from_entries(0, right)?;
    Ok(CartanWitness {
        a: model.limit_precision(&a, witness_prec)?,
        lambda,
        b: model.limit_precision(&b, witness_prec)?,
    })
}

/// The antidominant elementary-divisor vector of `g`.
pub fn cartan_invariant(model: &GroupModel, g: &GroupElem) -> Result<Cocharacter> {
    Ok(cartan_decompose(model, g)?.lambda)
}

/// `n = m + max_{λ ∈ C, a} |⟨a, λ⟩|·e_a`, a level (over `F`) at which
/// `g K_n g^{-1} ⊆ K_m` for every `g` in the union of the cosets `K π_λ K`.
pub fn precision_bound(datum: &BasedRootDatum, window: &[Cocharacter], m: u32) -> u32 {
    let s = window
        .iter()
        .map(|l| datum.max_weighted_pairing(l))
        .max()
        .unwrap_or(0);
    m + s as u32
}

/// `Γ_λ ⊆ (K/K_m)^2` as a sorted element list with a membership index.
#[derive(Clone, Debug)]
pub struct StabilizerTable {
    pub lambda: Cocharacter,
    elements: Vec<(u32, u32)>,
    index: HashSet<(u32, u32)>,
}

impl StabilizerTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[(u32, u32)] {
        &self.elements
    }

    pub fn contains(&self, pair: (u32, u32)) -> bool {
        self.index.contains(&pair)
    }
}

struct LambdaData {
    pi: GroupElem,
    pi_inv: GroupElem,
    gamma: OnceLock<Arc<StabilizerTable>>,
    reps: OnceLock<Vec<GroupElem>>,
    canon: Mutex<HashMap<(u32, u32), (u32, u32)>>,
}

/// Double-coset machinery for one [`GroupModel`], with per-`λ` caches.
pub struct Cosets {
    model: Arc<GroupModel>,
    per_lambda: Mutex<HashMap<Cocharacter, Arc<LambdaData>>>,
}

impl Cosets {
    pub fn new(model: Arc<GroupModel>) -> Self {
        Self {
            model,
            per_lambda: Mutex::new(HashMap::new()),
        }
    }

    pub fn model(&self) -> &Arc<GroupModel> {
        &self.model
    }

    fn data(&self, lambda: &Cocharacter) -> Result<Arc<LambdaData>> {
        if !self.model.datum().is_antidominant(lambda) {
            return Err(Error::Invalid(format!("{lambda} is not antidominant")));
        }
        if let Some(d) = self.per_lambda.lock().unwrap().get(lambda) {
            return Ok(d.clone());
        }
        let pi = self.model.pi_lambda(lambda)?;
        let pi_inv = self.model.pi_lambda(&lambda.scale(-1))?;
        let d = Arc::new(LambdaData {
            pi,
            pi_inv,
            gamma: OnceLock::new(),
            reps: OnceLock::new(),
            canon: Mutex::new(HashMap::new()),
        });
        Ok(self
            .per_lambda
            .lock()
            .unwrap()
            .entry(lambda.clone())
            .or_insert(d)
            .clone())
    }

    pub fn pi_lambda(&self, lambda: &Cocharacter) -> Result<GroupElem> {
        Ok(self.data(lambda)?.pi.clone())
    }

    fn check_label_guard(&self) -> Result<usize> {
        let q = self.model.quotient()?;
        if q.len() as u64 > QUOTIENT_LABEL_GUARD {
            return Err(Error::guard(
                "double-coset labels over K/K_m",
                q.len() as u64,
                QUOTIENT_LABEL_GUARD,
            ));
        }
        Ok(q.len())
    }

    /// `π_λ^{-1}·g·π_λ`.
    fn conjugate_down(&self, d: &LambdaData, g: &GroupElem) -> Result<GroupElem> {
        self.model.mul(&d.pi_inv, &self.model.mul(g, &d.pi)?)
    }

    /// Generators of `P_λ = K ∩ π_λ K π_λ^{-1}`: the torus of `K` and the root
    /// subgroups `x_{ij}(π^{max(0, λ_i-λ_j)} O)`.
    fn parahoric_generators(&self, lambda: &Cocharacter) -> Result<Vec<GroupElem>> {
        let model = &*self.model;
        let r = &**model.ring();
        let n = model.n();
        let top = model.km_level() + lambda.spread() as u32 + 1;
        let f = r.descriptor().f();
        let basis: Vec<RingElem> = (0..f).map(|s| r.pow(r.residue_generator(), s)).collect();
        let mut gens = Vec::new();
        let mut residue_units = Vec::new();
        let small = crate::residue::TruncatedRing::new(r.descriptor().clone(), 1)?;
        for x in small.elements() {
            if small.is_unit(x) {
                residue_units.push(small.lift_to(r, x)?);
            }
        }
        let mut units = residue_units.clone();
        for j in 1..top.min(r.level()) {
            for &b in &basis {
                units.push(r.add(r.one(), r.mul(b, r.pi_pow(j))));
            }
        }
        for &u in &units {
            let uinv = r.inverse(u)?;
            match model.kind() {
                FamilyKind::Gl => {
                    for i in 0..n {
                        let mut t = crate::group::matrix::identity(r, n);
                        t[i * n + i] = u;
                        gens.push(model.from_entries(0, t)?);
                    }
                }
                FamilyKind::Sl => {
                    for i in 0..n - 1 {
                        let mut t = crate::group::matrix::identity(r, n);
                        t[i * n + i] = u;
                        t[(i + 1) * n + i + 1] = uinv;
                        gens.push(model.from_entries(0, t)?);
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let lo = (lambda.0[i] - lambda.0[j]).max(0) as u32;
                for k in lo..top.min(r.level()) {
                    for &b in &basis {
                        let mut x = crate::group::matrix::identity(r, n);
                        x[i * n + j] = r.mul(b, r.pi_pow(k));
                        gens.push(model.from_entries(0, x)?);
                    }
                }
            }
        }
        Ok(gens)
    }

    /// The stabilizer `Γ_λ = {(ā, b̄) : a π_λ b^{-1} ∈ K_m π_λ K_m}`, computed as the
    /// image of `P_λ` under `g ↦ (ḡ, π_λ^{-1} g π_λ mod K_m)`.
    pub fn stabilizer(&self, lambda: &Cocharacter) -> Result<Arc<StabilizerTable>> {
        let d = self.data(lambda)?;
        if let Some(g) = d.gamma.get() {
            return Ok(g.clone());
        }
        self.check_label_guard()?;
        let q = self.model.quotient()?;
        let mut images = Vec::new();
        for g in self.parahoric_generators(lambda)? {
            let a = self.model.reduce_index(&g)?;
            let b = self.model.reduce_index(&self.conjugate_down(&d, &g)?)?;
            images.push((a, b));
        }
        images.sort();
        images.dedup();
        let id = (q.identity(), q.identity());
        let mut seen: HashSet<(u32, u32)> = HashSet::from([id]);
        let mut queue = VecDeque::from([id]);
        while let Some((a, b)) = queue.pop_front() {
            for &(ga, gb) in &images {
                let next = (q.mul(a, ga), q.mul(b, gb));
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        let mut elements: Vec<(u32, u32)> = seen.iter().copied().collect();
        elements.sort();
        let table = Arc::new(StabilizerTable {
            lambda: lambda.clone(),
            elements,
            index: seen,
        });
        Ok(d.gamma.get_or_init(|| table).clone())
    }

    /// Lexicographically smallest pair in `(a, b)·Γ_λ`.
    pub fn canonical_pair(&self, lambda: &Cocharacter, a: u32, b: u32) -> Result<(u32, u32)> {
        let d = self.data(lambda)?;
        if let Some(&c) = d.canon.lock().unwrap().get(&(a, b)) {
            return Ok(c);
        }
        let gamma = self.stabilizer(lambda)?;
        let q = self.model.quotient()?;
        let best = gamma
            .elements()
            .iter()
            .map(|&(x, y)| (q.mul(a, x), q.mul(b, y)))
            .min()
            .expect("Γ contains the identity");
        let mut cache = d.canon.lock().unwrap();
        for &(x, y) in gamma.elements() {
            cache.insert((q.mul(a, x), q.mul(b, y)), best);
        }
        Ok(best)
    }

    pub fn id_of_pair(&self, lambda: &Cocharacter, a: u32, b: u32) -> Result<DoubleCosetId> {
        let (a, b) = self.canonical_pair(lambda, a, b)?;
        Ok(DoubleCosetId {
            lambda: lambda.clone(),
            a,
            b,
        })
    }

    /// Label of `K_m g K_m`.
    pub fn canonical_id(&self, g: &GroupElem) -> Result<DoubleCosetId> {
        let w = cartan_decompose(&self.model, g)?;
        let q = self.model.quotient()?;
        let a = self.model.reduce_index(&w.a)?;
        let b = self.model.reduce_index(&w.b)?;
        self.id_of_pair(&w.lambda, a, q.inv(b))
    }

    /// Whether `(a, b)` is canonical for its orbit.
    pub fn is_canonical(&self, id: &DoubleCosetId) -> Result<bool> {
        Ok(self.canonical_pair(&id.lambda, id.a, id.b)? == (id.a, id.b))
    }

    /// `a·π_λ·b^{-1}`.
    pub fn representative(&self, id: &DoubleCosetId) -> Result<GroupElem> {
        let d = self.data(&id.lambda)?;
        let a = self.model.lift(id.a)?;
        let binv = self.model.inv(&self.model.lift(id.b)?)?;
        self.model.mul_all(&[&a, &d.pi, &binv])
    }

    /// Right coset representatives `u⁻·π_λ` of `K_m π_λ K_m = ⊔ x_i K_m`, with
    /// `u⁻` lower unitriangular, entries `π^M·r` and `r` running over
    /// `O/π^{λ_i-λ_j}`.
    pub fn basic_reps(&self, lambda: &Cocharacter) -> Result<Vec<GroupElem>> {
        let d = self.data(lambda)?;
        if let Some(r) = d.reps.get() {
            return Ok(r.clone());
        }
        let model = &*self.model;
        let r = &**model.ring();
        let n = model.n();
        let size = self.volume_of(lambda);
        if size > crate::group::KM_GUARD {
            return Err(Error::guard(
                "right coset representatives",
                size,
                crate::group::KM_GUARD,
            ));
        }
        let mut slots: Vec<(usize, Vec<RingElem>)> = Vec::new();
        let pm = r.pi_pow(model.km_level());
        for i in 0..n {
            for j in 0..i {
                let depth = (lambda.0[i] - lambda.0[j]) as u32;
                let vals = if depth == 0 {
                    vec![r.zero()]
                } else {
                    let small = crate::residue::TruncatedRing::new(r.descriptor().clone(), depth)?;
                    small
                        .elements()
                        .map(|x| Ok(r.mul(pm, small.lift_to(r, x)?)))
                        .collect::<Result<Vec<_>>>()?
                };
                slots.push((i * n + j, vals));
            }
        }
        let mut out = Vec::with_capacity(size as usize);
        let mut digits = vec![0usize; slots.len()];
        loop {
            let mut u = crate::group::matrix::identity(r, n);
            for (s, (pos, vals)) in slots.iter().enumerate() {
                u[*pos] = vals[digits[s]];
            }
            out.push(model.mul(&model.from_entries(0, u)?, &d.pi)?);
            let mut k = slots.len();
            let done = loop {
                if k == 0 {
                    break true;
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < slots[k].1.len() {
                    break false;
                }
                digits[k] = 0;
            };
            if done {
                break;
            }
        }
        Ok(d.reps.get_or_init(|| out).clone())
    }

    /// Number of right `K_m`-cosets in `K_m π_λ K_m`, read off the parametrization.
    fn volume_of(&self, lambda: &Cocharacter) -> u64 {
        let q = self.model.ring().q();
        let n = lambda.len();
        let mut v = 1u64;
        for i in 0..n {
            for j in 0..i {
                v = v.saturating_mul(
                    q.saturating_pow((lambda.0[i] - lambda.0[j]).unsigned_abs() as u32),
                );
            }
        }
        v
    }

    /// `x_1, …, x_d` with `K_m x K_m = ⊔ x_i K_m` for the coset labelled `id`.
    pub fn right_coset_reps(&self, id: &DoubleCosetId) -> Result<Vec<GroupElem>> {
        let a = self.model.lift(id.a)?;
        let binv = self.model.inv(&self.model.lift(id.b)?)?;
        self.basic_reps(&id.lambda)?
            .iter()
            .map(|x| self.model.mul_all(&[&a, x, &binv]))
            .collect()
    }

    /// Number of right cosets in the double coset labelled `id`.
    pub fn volume(&self, id: &DoubleCosetId) -> u64 {
        self.volume_of(&id.lambda)
    }

    /// Right coset representatives by brute force: every `k·π_λ` for `k` in
    /// `K_m/K_c`, deduplicated by testing `π_λ^{-1} k_i^{-1} k π_λ ∈ K_m`.
    pub fn right_coset_reps_brute(&self, lambda: &Cocharacter) -> Result<Vec<GroupElem>> {
        let d = self.data(lambda)?;
        self.right_coset_reps_brute_of(&d.pi, &d.pi_inv)
    }

    /// The same for `K_m x K_m`, with `x^{-1}` supplied.
    pub fn right_coset_reps_brute_of(
        &self,
        x: &GroupElem,
        x_inv: &GroupElem,
    ) -> Result<Vec<GroupElem>> {
        let model = &*self.model;
        let c = model.km_level() + cartan_invariant(model, x)?.spread() as u32;
        let mut kept: Vec<(GroupElem, GroupElem)> = Vec::new();
        for k in model.km_quotient(c)? {
            let mut fresh = true;
            for (_, kinv) in &kept {
                let t = model.mul_all(&[x_inv, &model.mul(kinv, &k)?, x])?;
                if model.in_km(&t)? {
                    fresh = false;
                    break;
                }
            }
            if fresh {
                let kinv = model.inv(&k)?;
                kept.push((k, kinv));
            }
        }
        kept.into_iter().map(|(k, _)| model.mul(&k, x)).collect()
    }

    /// All labels with invariant `λ`, i.e. the orbit space `X_λ`, in label order.
    pub fn census(&self, lambda: &Cocharacter) -> Result<Vec<DoubleCosetId>> {
        let len = self.check_label_guard()? as u64;
        if len * len > PAIR_GUARD {
            return Err(Error::guard("double-coset census", len * len, PAIR_GUARD));
        }
        let gamma = self.stabilizer(lambda)?;
        let q = self.model.quotient()?;
        let len = len as u32;
        let mut seen = vec![false; (len * len) as usize];
        let mut out = Vec::new();
        for a in 0..len {
            for b in 0..len {
                if seen[(a * len + b) as usize] {
                    continue;
                }
                out.push(DoubleCosetId {
                    lambda: lambda.clone(),
                    a,
                    b,
                });
                for &(x, y) in gamma.elements() {
                    let (na, nb) = (q.mul(a, x), q.mul(b, y));
                    seen[(na * len + nb) as usize] = true;
                }
            }
        }
        Ok(out)
    }

    /// Whether `g K_n g^{-1} ⊆ K_m` for `g = x` (given with its inverse), tested
    /// on generators of `K_n` (`n` a ring level).
    pub fn conjugates_into_km(
        &self,
        x: &GroupElem,
        x_inv: &GroupElem,
        n_level: u32,
    ) -> Result<bool> {
        let model = &*self.model;
        let r = &**model.ring();
        let nn = model.n();
        if n_level >= r.level() {
            return Err(Error::precision(
                "certificate level must be below the working level",
            ));
        }
        let f = r.descriptor().f();
        let mut gens = Vec::new();
        for j in n_level..r.level() {
            for s in 0..f {
                let b = r.mul(r.pow(r.residue_generator(), s), r.pi_pow(j));
                for i in 0..nn {
                    for k in 0..nn {
                        let mut h = crate::group::matrix::identity(r, nn);
                        h[i * nn + k] = r.add(h[i * nn + k], b);
                        if i == k && model.kind() == FamilyKind::Sl {
                            let other = (i + 1) % nn;
                            h[other * nn + other] = r.inverse(h[i * nn + i])?;
                        }
                        gens.push(model.from_entries(0, h)?);
                    }
                }
            }
        }
        for h in gens {
            let c = model.mul_all(&[x, &h, x_inv])?;
            if !model.in_km(&c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `π_λ^{-1}` for antidominant `λ`, built exactly.
    pub fn pi_lambda_inv(&self, lambda: &Cocharacter) -> Result<GroupElem> {
        Ok(self.data(lambda)?.pi_inv.clone())
    }

    /// The distinct Cartan invariants `λ` among cached computations.
    pub fn cached_lambdas(&self) -> BTreeSet<Cocharacter> {
        self.per_lambda.lock().unwrap().keys().cloned().collect()
    }
}
