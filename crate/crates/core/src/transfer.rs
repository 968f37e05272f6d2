//! The Kazhdan map between Hecke algebras of two close fields.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::cosets::DoubleCosetId;
use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElem, Product};
use crate::residue::TruncIso;
use crate::root_datum::Cocharacter;

/// Quotient multiplication is checked on every pair up to this many pairs,
/// and on a sample of `SAMPLED_PAIRS` above it.
pub const EXHAUSTIVE_PAIRS: u64 = 1_000_000;
pub const SAMPLED_PAIRS: u64 = 10_000;

/// Data of the map `Kaz_m`: the two algebras, the truncation isomorphism, the
/// induced bijection `K/K_m → K'/K'_m` and the basis bijection over a window.
pub struct TransferPlan {
    source: Arc<HeckeAlgebra>,
    target: Arc<HeckeAlgebra>,
    psi: TruncIso,
    group_map: Vec<u32>,
    window: Vec<Cocharacter>,
    basis_map: BTreeMap<DoubleCosetId, DoubleCosetId>,
}

impl std::fmt::Debug for TransferPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TransferPlan")
            .field("source", &self.source.model().spec().name())
            .field("target", &self.target.model().spec().name())
            .field("l", &self.psi.level())
            .field("window", &self.window)
            .finish()
    }
}

impl TransferPlan {
    /// Build and audit a plan. `psi` identifies the matrix rings of both sides at
    /// some level `l ≥` the level of `K/K_m`; `window` lists Cartan invariants.
    pub fn build(
        source: Arc<HeckeAlgebra>,
        target: Arc<HeckeAlgebra>,
        psi: &TruncIso,
        window: &[Cocharacter],
        seed: u64,
    ) -> Result<Self> {
        let (ms, mt) = (source.model(), target.model());
        let (ss, st) = (ms.spec(), mt.spec());
        if ss.kind() != st.kind()
            || ss.n() != st.n()
            || ss.rel_e() != st.rel_e()
            || ss.rel_f() != st.rel_f()
        {
            return Err(Error::Invalid(
                "the two sides have different root data".into(),
            ));
        }
        if ss.base_q() != st.base_q() || ms.m() != mt.m() {
            return Err(Error::Invalid("the two sides differ in q or m".into()));
        }
        let same_field = |a: &crate::residue::TruncatedRing, b: &crate::residue::TruncatedRing| {
            a.descriptor() == b.descriptor()
        };
        if !same_field(psi.source(), ms.ring()) || !same_field(psi.target(), mt.ring()) {
            return Err(Error::Invalid(
                "ψ does not connect the two matrix rings".into(),
            ));
        }
        let level = ms.km_level();
        if psi.level() < level {
            return Err(Error::Invalid(format!(
                "ψ has level {} below the quotient level {level}",
                psi.level()
            )));
        }
        let psi_m = psi.reduce(level)?;
        let (qs, qt) = (ms.quotient()?, mt.quotient()?);
        if qs.len() != qt.len() {
            return Err(Error::NotClose {
                level: psi.level(),
                detail: "quotient orders differ".into(),
            });
        }
        let group_map = (0..qs.len() as u32)
            .map(|i| {
                let img: Vec<_> = qs
                    .codes(i)
                    .iter()
                    .map(|&c| {
                        qt.ring()
                            .from_code(psi_m.apply(psi_m.source().from_code(c)).code())
                    })
                    .collect();
                qt.index_of(&img).ok_or_else(|| {
                    Error::Audit(format!("image of quotient element {i} is not in K'/K'_m"))
                })
            })
            .collect::<Result<Vec<u32>>>()?;
        let mut plan = Self {
            source,
            target,
            psi: psi.clone(),
            group_map,
            window: window.to_vec(),
            basis_map: BTreeMap::new(),
        };
        plan.audit_group_map(seed)?;
        for lambda in window {
            plan.audit_stabilizer(lambda)?;
        }
        let mut basis_map = BTreeMap::new();
        for lambda in window {
            for id in plan.source.cosets().census(lambda)? {
                let image = plan.map_id(&id)?;
                let (vs, vt) = (plan.source.volume(&id), plan.target.volume(&image));
                if vs != vt {
                    return Err(Error::NotClose {
                        level: psi.level(),
                        detail: format!("volume of {id} is {vs} but its image has volume {vt}"),
                    });
                }
                basis_map.insert(id, image);
            }
        }
        plan.basis_map = basis_map;
        Ok(plan)
    }

    pub fn source(&self) -> &Arc<HeckeAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<HeckeAlgebra> {
        &self.target
    }

    pub fn closeness(&self) -> u32 {
        self.psi.level()
    }

    pub fn window(&self) -> &[Cocharacter] {
        &self.window
    }

    pub fn basis_map(&self) -> &BTreeMap<DoubleCosetId, DoubleCosetId> {
        &self.basis_map
    }

    /// `p_{m,*}` on quotient indices.
    pub fn map_quotient(&self, i: u32) -> u32 {
        self.group_map[i as usize]
    }

    fn audit_group_map(&self, seed: u64) -> Result<()> {
        let q = self.source.model().quotient()?;
        let qt = self.target.model().quotient()?;
        let n = q.len() as u32;
        if self.group_map.iter().collect::<BTreeSet<_>>().len() != q.len() {
            return Err(Error::Audit("p_m is not injective".into()));
        }
        let check = |a: u32, b: u32| {
            let lhs = self.map_quotient(q.mul(a, b));
            let rhs = qt.mul(self.map_quotient(a), self.map_quotient(b));
            if lhs == rhs {
                Ok(())
            } else {
                Err(Error::Audit(format!(
                    "p_m fails to respect the product of {a} and {b}"
                )))
            }
        };
        if (n as u64).pow(2) <= EXHAUSTIVE_PAIRS {
            (0..n)
                .into_par_iter()
                .try_for_each(|a| (0..n).try_for_each(|b| check(a, b)))
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            (0..SAMPLED_PAIRS).try_for_each(|_| check(rng.gen_range(0..n), rng.gen_range(0..n)))
        }
    }

    /// `p_{m,*}(Γ_λ) = Γ'_λ`, elementwise.
    fn audit_stabilizer(&self, lambda: &Cocharacter) -> Result<()> {
        let gs = self.source.cosets().stabilizer(lambda)?;
        let gt = self.target.cosets().stabilizer(lambda)?;
        let image: BTreeSet<(u32, u32)> = gs
            .elements()
            .iter()
            .map(|&(a, b)| (self.map_quotient(a), self.map_quotient(b)))
            .collect();
        let expected: BTreeSet<(u32, u32)> = gt.elements().iter().copied().collect();
        if image != expected {
            let missing = expected.difference(&image).count();
            return Err(Error::NotClose {
                level: self.psi.level(),
                detail: format!(
                    "stabilizer of {lambda} has order {} on the source and {} on the target, {missing} target elements unmatched",
                    gs.order(),
                    gt.order()
                ),
            });
        }
        Ok(())
    }

    /// `(λ, a, b) ↦ (λ, p(a), p(b))`, re-canonicalized on the target side.
    pub fn map_id(&self, id: &DoubleCosetId) -> Result<DoubleCosetId> {
        if let Some(img) = self.basis_map.get(id) {
            return Ok(img.clone());
        }
        self.target.cosets().id_of_pair(
            &id.lambda,
            self.map_quotient(id.a),
            self.map_quotient(id.b),
        )
    }

    /// Coefficient-preserving pushforward along the basis bijection.
    pub fn kazhdan_map(&self, f: &HeckeElem) -> Result<HeckeElem> {
        let mut out = HeckeElem::zero(f.level());
        for (id, &c) in f.terms() {
            let image = self
                .basis_map
                .get(id)
                .ok_or_else(|| Error::Invalid(format!("{id} lies outside the plan's window")))?;
            out.add_term(image.clone(), c);
        }
        Ok(out)
    }

    /// Push a product forward without requiring its support to lie in the window.
    fn push_product(&self, p: &Product) -> Result<BTreeMap<DoubleCosetId, i64>> {
        let mut out = BTreeMap::new();
        for (z, &c) in p {
            *out.entry(self.map_id(z)?).or_insert(0) += c;
        }
        Ok(out)
    }

    /// Compare `Kaz(t_x * t_y)` with `Kaz(t_x) * Kaz(t_y)` for all pairs of ids.
    pub fn compare_structure_constants(&self, ids: &[DoubleCosetId]) -> Result<TransferReport> {
        let pairs: Vec<(&DoubleCosetId, &DoubleCosetId)> = ids
            .iter()
            .flat_map(|x| ids.iter().map(move |y| (x, y)))
            .collect();
        let per_pair: Vec<Vec<Mismatch>> = pairs
            .par_iter()
            .map(|&(x, y)| -> Result<Vec<Mismatch>> {
                let pushed = self.push_product(self.source.product_basis(x, y)?.as_ref())?;
                let (xt, yt) = (self.map_id(x)?, self.map_id(y)?);
                let direct = self.target.product_basis(&xt, &yt)?;
                let support: BTreeSet<&DoubleCosetId> =
                    pushed.keys().chain(direct.keys()).collect();
                Ok(support
                    .into_iter()
                    .filter_map(|z| {
                        let (a, b) = (
                            pushed.get(z).copied().unwrap_or(0),
                            direct.get(z).copied().unwrap_or(0),
                        );
                        (a != b).then(|| Mismatch {
                            x: x.clone(),
                            y: y.clone(),
                            z: z.clone(),
                            c_f: a,
                            c_f_prime: b,
                        })
                    })
                    .collect())
            })
            .collect::<Result<_>>()?;
        Ok(TransferReport {
            pairs_checked: pairs.len(),
            mismatches: per_pair.into_iter().flatten().collect(),
            l: self.psi.level(),
            m: self.source.level(),
            source: self.source.model().spec().name(),
            target: self.target.model().spec().name(),
        })
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Mismatch {
    pub x: DoubleCosetId,
    pub y: DoubleCosetId,
    /// Target-side label of the source coefficient.
    pub z: DoubleCosetId,
    pub c_f: i64,
    #[serde(rename = "c_f'")]
    pub c_f_prime: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub pairs_checked: usize,
    pub mismatches: Vec<Mismatch>,
    pub l: u32,
    pub m: u32,
    pub source: String,
    pub target: String,
}

impl TransferReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl std::fmt::Display for TransferReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "{} -> {} (m = {}, l = {})",
            self.source, self.target, self.m, self.l
        )?;
        writeln!(
            f,
            "pairs checked: {}, mismatches: {}",
            self.pairs_checked,
            self.mismatches.len()
        )?;
        for mm in &self.mismatches {
            writeln!(
                f,
                "  {} * {} at {}: {} vs {}",
                mm.x, mm.y, mm.z, mm.c_f, mm.c_f_prime
            )?;
        }
        Ok(())
    }
}
