//! Sparse elements of `H(G(F), K_m)` with `vol(K_m) = 1`, and convolution by
//! counting right cosets.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cosets::{Cosets, DoubleCosetId};
use crate::error::{Error, Result};
use crate::group::{GroupElem, GroupModel};
use crate::root_datum::{pairing, BasedRootDatum, Cocharacter};

pub type Coeff = Ratio<i64>;

/// A finitely supported `K_m`-bi-invariant function, as coefficients on the
/// basis `t_x = char(K_m x K_m)`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElem {
    level: u32,
    terms: BTreeMap<DoubleCosetId, Coeff>,
}

impl HeckeElem {
    pub fn zero(level: u32) -> Self {
        Self {
            level,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(level: u32, id: DoubleCosetId) -> Self {
        Self {
            level,
            terms: BTreeMap::from([(id, Coeff::one())]),
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn terms(&self) -> &BTreeMap<DoubleCosetId, Coeff> {
        &self.terms
    }

    pub fn coeff(&self, id: &DoubleCosetId) -> Coeff {
        self.terms.get(id).copied().unwrap_or_else(Coeff::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, id: DoubleCosetId, c: Coeff) {
        let entry = self.terms.entry(id.clone()).or_insert_with(Coeff::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&id);
        }
    }

    pub fn add(&self, other: &HeckeElem) -> Result<HeckeElem> {
        if self.level != other.level {
            return Err(Error::Invalid("Hecke elements of different levels".into()));
        }
        let mut out = self.clone();
        for (id, &c) in &other.terms {
            out.add_term(id.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Coeff) -> HeckeElem {
        if c.is_zero() {
            return HeckeElem::zero(self.level);
        }
        Self {
            level: self.level,
            terms: self
                .terms
                .iter()
                .map(|(k, &v)| (k.clone(), v * c))
                .collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = ElemJson {
            level: self.level,
            terms: self
                .terms
                .iter()
                .map(|(id, c)| TermJson {
                    id: id.clone(),
                    coeff: format!("{}/{}", c.numer(), c.denom()),
                })
                .collect(),
        };
        serde_json::to_value(json).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<HeckeElem> {
        let json: ElemJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
        let mut out = HeckeElem::zero(json.level);
        for t in json.terms {
            let (n, d) = t.coeff.split_once('/').unwrap_or((&t.coeff, "1"));
            let parse = |s: &str| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Invalid(format!("coefficient {s}: {e}")))
            };
            let d = parse(d)?;
            if d == 0 {
                return Err(Error::Invalid("zero denominator".into()));
            }
            out.add_term(t.id, Coeff::new(parse(n)?, d));
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    id: DoubleCosetId,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct ElemJson {
    level: u32,
    terms: Vec<TermJson>,
}

/// `∏_{a > 0} (q^{f_a})^{|⟨a, μ⟩|·e_a}` for a cocharacter `μ` of the maximal
/// split torus over `F` (`q` the residue size of `F`).
pub fn volume_closed_form(datum: &BasedRootDatum, q: u64, mu: &Cocharacter) -> u64 {
    datum
        .positive_roots()
        .map(|a| q.pow(a.f * a.e * pairing(&a.root, mu).unsigned_abs() as u32))
        .product()
}

/// The same volume for a Cartan invariant `λ` counted in powers of the matrix
/// ring's uniformizer: `∏_{a > 0} (q^{f_a})^{|⟨a, λ⟩|}`.
pub fn volume_of_invariant(datum: &BasedRootDatum, q: u64, lambda: &Cocharacter) -> u64 {
    datum
        .positive_roots()
        .map(|a| q.pow(a.f * pairing(&a.root, lambda).unsigned_abs() as u32))
        .product()
}

/// Structure constants `t_x * t_y = Σ c_z t_z`.
pub type Product = BTreeMap<DoubleCosetId, i64>;

/// `H(G(F), K_m)` for one group model.
pub struct HeckeAlgebra {
    cosets: Arc<Cosets>,
    products: Mutex<HashMap<(DoubleCosetId, DoubleCosetId), Arc<Product>>>,
}

impl HeckeAlgebra {
    pub fn new(cosets: Arc<Cosets>) -> Self {
        Self {
            cosets,
            products: Mutex::new(HashMap::new()),
        }
    }

    pub fn from_model(model: GroupModel) -> Self {
        Self::new(Arc::new(Cosets::new(Arc::new(model))))
    }

    pub fn cosets(&self) -> &Arc<Cosets> {
        &self.cosets
    }

    pub fn model(&self) -> &Arc<GroupModel> {
        self.cosets.model()
    }

    pub fn level(&self) -> u32 {
        self.model().m()
    }

    pub fn basis(&self, g: &GroupElem) -> Result<HeckeElem> {
        Ok(HeckeElem::basis(self.level(), self.cosets.canonical_id(g)?))
    }

    pub fn unit(&self) -> Result<HeckeElem> {
        self.basis(&self.model().identity())
    }

    /// `t_{π_λ}`.
    pub fn pi_basis(&self, lambda: &Cocharacter) -> Result<HeckeElem> {
        self.basis(&self.model().pi_lambda(lambda)?)
    }

    pub fn volume(&self, id: &DoubleCosetId) -> u64 {
        self.cosets.volume(id)
    }

    /// Closed-form volume of `K_m π_λ K_m` for a Cartan invariant `λ`.
    pub fn closed_form_volume(&self, lambda: &Cocharacter) -> u64 {
        volume_of_invariant(self.model().datum(), self.model().spec().base_q(), lambda)
    }

    /// `t_x * t_y`: every product `x_i·y_j` of right coset representatives is
    /// labelled, and a coset `z` that is hit `N_z` times gets coefficient
    /// `N_z / vol(z)`, since each right coset inside `K_m z K_m` is hit equally often.
    pub fn product_basis(&self, x: &DoubleCosetId, y: &DoubleCosetId) -> Result<Arc<Product>> {
        let key = (x.clone(), y.clone());
        if let Some(p) = self.products.lock().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let model = self.model();
        let xs = self.cosets.right_coset_reps(x)?;
        let ys = self.cosets.right_coset_reps(y)?;
        let partial: Vec<BTreeMap<DoubleCosetId, u64>> = xs
            .par_iter()
            .map(|xi| {
                let mut counts = BTreeMap::new();
                for yj in &ys {
                    let z = self.cosets.canonical_id(&model.mul(xi, yj)?)?;
                    *counts.entry(z).or_insert(0u64) += 1;
                }
                Ok(counts)
            })
            .collect::<Result<_>>()?;
        let mut hits: BTreeMap<DoubleCosetId, u64> = BTreeMap::new();
        for part in partial {
            for (z, n) in part {
                *hits.entry(z).or_insert(0) += n;
            }
        }
        let mut out = Product::new();
        let mut mass = 0u64;
        for (z, n) in hits {
            let vol = self.volume(&z);
            if n % vol != 0 {
                return Err(Error::Consistency(format!(
                    "{z} hit {n} times, not a multiple of its volume {vol}"
                )));
            }
            mass += n;
            out.insert(z, (n / vol) as i64);
        }
        if mass != xs.len() as u64 * ys.len() as u64 {
            return Err(Error::Consistency("mass conservation failed".into()));
        }
        let out = Arc::new(out);
        self.products.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    pub fn convolve(&self, f: &HeckeElem, g: &HeckeElem) -> Result<HeckeElem> {
        if f.level != self.level() || g.level != self.level() {
            return Err(Error::Invalid(
                "Hecke element level differs from the algebra".into(),
            ));
        }
        let mut out = HeckeElem::zero(self.level());
        for (x, &cx) in &f.terms {
            for (y, &cy) in &g.terms {
                for (z, &c) in self.product_basis(x, y)?.iter() {
                    out.add_term(z.clone(), cx * cy * Coeff::from_integer(c));
                }
            }
        }
        Ok(out)
    }

    /// `Σ_z c_z vol(z)` for `f = Σ c_z t_z`.
    pub fn mass(&self, f: &HeckeElem) -> Coeff {
        f.terms
            .iter()
            .map(|(z, &c)| c * Coeff::from_integer(self.volume(z) as i64))
            .sum()
    }

    /// Both sides of `h(k π_λ k') = h(k) * h(π_λ) * h(k')`; errors on mismatch.
    pub fn conjugate_sandwich(
        &self,
        k: &GroupElem,
        lambda: &Cocharacter,
        k2: &GroupElem,
    ) -> Result<HeckeElem> {
        let model = self.model();
        if !model.in_k(k)? || !model.in_k(k2)? {
            return Err(Error::Invalid("sandwich factors must lie in K".into()));
        }
        let pi = model.pi_lambda(lambda)?;
        let lhs = self.basis(&model.mul_all(&[k, &pi, k2])?)?;
        let rhs = self.convolve(
            &self.convolve(&self.basis(k)?, &self.basis(&pi)?)?,
            &self.basis(k2)?,
        )?;
        if lhs != rhs {
            return Err(Error::Consistency(format!(
                "sandwich identity fails for λ = {lambda}"
            )));
        }
        Ok(lhs)
    }

    /// Factor `t_id = h(a) * h(π_{g_1}) * … * h(π_{g_r}) * h(b^{-1})` with
    /// `λ = Σ g_i` over the monoid generators, and check the product.
    pub fn certify(&self, id: &DoubleCosetId, generators: &[Cocharacter]) -> Result<Certificate> {
        let model = self.model();
        let datum = model.datum();
        let word = datum.decompose(&id.lambda, generators).ok_or_else(|| {
            Error::Consistency(format!("{} is not a sum of monoid generators", id.lambda))
        })?;
        let q = model.quotient()?;
        let a = model.lift(id.a)?;
        let binv = model.lift(q.inv(id.b))?;
        let mut acc = self.basis(&a)?;
        for &gi in &word {
            acc = self.convolve(&acc, &self.pi_basis(&generators[gi])?)?;
        }
        acc = self.convolve(&acc, &self.basis(&binv)?)?;
        let target = HeckeElem::basis(self.level(), id.clone());
        Ok(Certificate {
            id: id.clone(),
            generators: word.iter().map(|&i| generators[i].clone()).collect(),
            verified: acc == target,
        })
    }
}

/// A factorization of a basis element into generators.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub id: DoubleCosetId,
    pub generators: Vec<Cocharacter>,
    pub verified: bool,
}
