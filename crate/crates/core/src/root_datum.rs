//! Based root data of the implemented families: cocharacter lattices, Weyl
//! groups, antidominant representatives and monoid generators.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

/// A cocharacter `λ ∈ X_*(T) ⊂ Z^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cocharacter(pub Vec<i64>);

impl Cocharacter {
    pub fn zero(n: usize) -> Self {
        Cocharacter(vec![0; n])
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Cocharacter) -> Cocharacter {
        Cocharacter(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Cocharacter) -> Cocharacter {
        Cocharacter(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Cocharacter {
        Cocharacter(self.0.iter().map(|a| a * k).collect())
    }

    pub fn sup_norm(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// `max_a |⟨a, λ⟩|` over the roots `e_i - e_j`.
    pub fn spread(&self) -> i64 {
        match (self.0.iter().max(), self.0.iter().min()) {
            (Some(hi), Some(lo)) => hi - lo,
            _ => 0,
        }
    }
}

impl fmt::Debug for Cocharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Cocharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Which matrix group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    #[serde(rename = "GL")]
    Gl,
    #[serde(rename = "SL")]
    Sl,
}

/// A relative root `a` with the data entering the volume formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeRoot {
    pub root: Vec<i64>,
    /// Ramification index `e_a` of `L_a/F`.
    pub e: u32,
    /// Residue degree `f_a` of `L_a/F`, so `q_{L_a} = q^{f_a}`.
    pub f: u32,
    /// Whether `2a` is also a root. No implemented family sets this.
    pub double_is_root: bool,
}

/// The based root datum of `GL_n`, `SL_n`, or a Weil restriction of one of them
/// (which carries decorations `e_a`, `f_a` on every relative root).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedRootDatum {
    kind: FamilyKind,
    n: usize,
    roots: Vec<RelativeRoot>,
    simple: Vec<usize>,
}

fn root_vec(n: usize, i: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v[j] = -1;
    v
}

impl BasedRootDatum {
    /// Split `GL_n` / `SL_n`.
    pub fn split(kind: FamilyKind, n: usize) -> Self {
        Self::decorated(kind, n, 1, 1)
    }

    /// `Res_{E/F}` of `GL_n` / `SL_n`: the datum of the split form with every
    /// root decorated by `e(E/F)` and `f(E/F)`.
    pub fn decorated(kind: FamilyKind, n: usize, e: u32, f: u32) -> Self {
        assert!(n >= 1, "rank must be positive");
        let mut roots = Vec::new();
        let mut simple = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if j == i + 1 {
                    simple.push(roots.len());
                }
                roots.push(RelativeRoot {
                    root: root_vec(n, i, j),
                    e,
                    f,
                    double_is_root: false,
                });
            }
        }
        Self {
            kind,
            n,
            roots,
            simple,
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// Size `n` of the matrices; the cocharacter lattice sits in `Z^n`.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn roots(&self) -> &[RelativeRoot] {
        &self.roots
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &RelativeRoot> {
        self.roots
            .iter()
            .filter(|r| r.root.iter().position(|&x| x == 1) < r.root.iter().position(|&x| x == -1))
    }

    pub fn simple_roots(&self) -> impl Iterator<Item = &RelativeRoot> {
        self.simple.iter().map(|&i| &self.roots[i])
    }

    /// Coroot of `e_i - e_j` is `e_i - e_j` under the standard pairing.
    pub fn coroot(&self, root: &[i64]) -> Cocharacter {
        Cocharacter(root.to_vec())
    }

    pub fn in_lattice(&self, lambda: &Cocharacter) -> bool {
        lambda.len() == self.n && (self.kind == FamilyKind::Gl || lambda.0.iter().sum::<i64>() == 0)
    }

    pub fn is_antidominant(&self, lambda: &Cocharacter) -> bool {
        self.simple_roots().all(|a| pairing(&a.root, lambda) <= 0)
    }

    /// Largest `|⟨a, λ⟩|` over all roots (0 for rank one).
    pub fn max_pairing(&self, lambda: &Cocharacter) -> i64 {
        self.roots
            .iter()
            .map(|a| pairing(&a.root, lambda).abs())
            .max()
            .unwrap_or(0)
    }

    /// Largest `|⟨a, λ⟩|·e_a` over all roots.
    pub fn max_weighted_pairing(&self, lambda: &Cocharacter) -> i64 {
        self.roots
            .iter()
            .map(|a| pairing(&a.root, lambda).abs() * a.e as i64)
            .max()
            .unwrap_or(0)
    }

    fn reflect(&self, root: &[i64], lambda: &[i64]) -> Vec<i64> {
        let k = pairing(root, &Cocharacter(lambda.to_vec()));
        lambda.iter().zip(root).map(|(l, a)| l - k * a).collect()
    }

    pub fn weyl_group(&self) -> WeylGroup {
        WeylGroup::generate(self)
    }

    /// The antidominant element of the Weyl orbit of `λ` and a witness `w`
    /// with `w·λ = λ_-`.
    pub fn antidominant_rep(&self, lambda: &Cocharacter) -> (Cocharacter, WeylElement) {
        let mut cur = lambda.0.clone();
        let mut w = WeylElement::identity(self.n);
        loop {
            let bad = self
                .simple_roots()
                .find(|a| pairing(&a.root, &Cocharacter(cur.clone())) > 0);
            match bad {
                None => return (Cocharacter(cur), w),
                Some(a) => {
                    cur = self.reflect(&a.root, &cur);
                    w = WeylElement::reflection(self.n, &a.root).compose(&w);
                }
            }
        }
    }

    /// A finite set `C_0` of antidominant cocharacters containing 0 whose sums
    /// exhaust the antidominant monoid.
    pub fn semigroup_generators(&self) -> Vec<Cocharacter> {
        let n = self.n;
        let mut gens = vec![Cocharacter::zero(n)];
        match self.kind {
            FamilyKind::Gl => {
                for k in 1..n {
                    let mut v = vec![0; n];
                    for x in v.iter_mut().skip(n - k) {
                        *x = 1;
                    }
                    gens.push(Cocharacter(v));
                }
                gens.push(Cocharacter(vec![1; n]));
                gens.push(Cocharacter(vec![-1; n]));
            }
            FamilyKind::Sl => {
                // Irreducible elements of the (pointed) antidominant monoid.
                let bound = n as i64;
                let cands: Vec<Cocharacter> = self
                    .antidominant_box(bound)
                    .into_iter()
                    .filter(|l| !l.is_zero())
                    .collect();
                let set: HashSet<&Cocharacter> = cands.iter().collect();
                for c in &cands {
                    let reducible = cands.iter().any(|d| {
                        d != c && {
                            let rest = c.sub(d);
                            !rest.is_zero() && set.contains(&rest)
                        }
                    });
                    if !reducible {
                        gens.push(c.clone());
                    }
                }
            }
        }
        gens
    }

    /// All antidominant lattice elements with `‖λ‖∞ ≤ bound`, in lexicographic order.
    pub fn antidominant_box(&self, bound: i64) -> Vec<Cocharacter> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.n);
        fn rec(n: usize, bound: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            let lo = cur.last().copied().unwrap_or(-bound);
            for x in lo..=bound {
                cur.push(x);
                rec(n, bound, cur, out);
                cur.pop();
            }
        }
        rec(self.n, bound, &mut cur, &mut out);
        out.sort();
        out.into_iter()
            .map(Cocharacter)
            .filter(|l| self.in_lattice(l))
            .collect()
    }

    /// Antidominant `λ` with `‖λ‖∞ ≤ bound` and `max_a |⟨a,λ⟩| ≤ max_spread`.
    pub fn window(&self, bound: i64, max_spread: i64) -> Vec<Cocharacter> {
        self.antidominant_box(bound)
            .into_iter()
            .filter(|l| self.max_pairing(l) <= max_spread)
            .collect()
    }

    /// Write an antidominant `λ` as a sum of nonzero elements of `generators`;
    /// the certificate lists generator indices with multiplicity.
    pub fn decompose(
        &self,
        lambda: &Cocharacter,
        generators: &[Cocharacter],
    ) -> Option<Vec<usize>> {
        if !self.is_antidominant(lambda) || !self.in_lattice(lambda) {
            return None;
        }
        match self.kind {
            FamilyKind::Gl => self.decompose_gl(lambda, generators),
            FamilyKind::Sl => {
                let mut memo = HashMap::new();
                self.decompose_pointed(lambda, generators, &mut memo)
            }
        }
    }

    fn decompose_gl(&self, lambda: &Cocharacter, generators: &[Cocharacter]) -> Option<Vec<usize>> {
        let find = |v: &Cocharacter| generators.iter().position(|g| g == v);
        let mut out = Vec::new();
        let n = self.n;
        let l = &lambda.0;
        let central = if l[0] >= 0 { vec![1; n] } else { vec![-1; n] };
        let ci = find(&Cocharacter(central))?;
        out.extend(std::iter::repeat_n(ci, l[0].unsigned_abs() as usize));
        for k in 1..n {
            let gap = l[k] - l[k - 1];
            let mut v = vec![0; n];
            for x in v.iter_mut().skip(k) {
                *x = 1;
            }
            let gi = find(&Cocharacter(v))?;
            out.extend(std::iter::repeat_n(gi, gap as usize));
        }
        Some(out)
    }

    fn decompose_pointed(
        &self,
        lambda: &Cocharacter,
        generators: &[Cocharacter],
        memo: &mut HashMap<Cocharacter, Option<Vec<usize>>>,
    ) -> Option<Vec<usize>> {
        if lambda.is_zero() {
            return Some(Vec::new());
        }
        if let Some(r) = memo.get(lambda) {
            return r.clone();
        }
        let height = |v: &Cocharacter| {
            v.0.iter()
                .enumerate()
                .map(|(i, x)| i as i64 * x)
                .sum::<i64>()
        };
        let mut result = None;
        for (gi, g) in generators.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let rest = lambda.sub(g);
            if !self.is_antidominant(&rest) || height(&rest) >= height(lambda) {
                continue;
            }
            if let Some(mut cert) = self.decompose_pointed(&rest, generators, memo) {
                cert.push(gi);
                cert.sort();
                result = Some(cert);
                break;
            }
        }
        memo.insert(lambda.clone(), result.clone());
        result
    }
}

/// `⟨a, λ⟩`.
pub fn pairing(root: &[i64], lambda: &Cocharacter) -> i64 {
    root.iter().zip(&lambda.0).map(|(a, l)| a * l).sum()
}

/// An element of the Weyl group as an integer matrix acting on `X_*`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeylElement {
    n: usize,
    mat: Vec<i64>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        let mut mat = vec![0; n * n];
        for i in 0..n {
            mat[i * n + i] = 1;
        }
        Self { n, mat }
    }

    /// `s_a(λ) = λ - ⟨a,λ⟩ a^∨`.
    pub fn reflection(n: usize, root: &[i64]) -> Self {
        let mut mat = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                mat[i * n + j] = i64::from(i == j) - root[i] * root[j];
            }
        }
        Self { n, mat }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> Self {
        let n = self.n;
        let mut mat = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.mat[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    mat[i * n + j] += a * other.mat[k * n + j];
                }
            }
        }
        Self { n, mat }
    }

    pub fn apply(&self, lambda: &Cocharacter) -> Cocharacter {
        let n = self.n;
        Cocharacter(
            (0..n)
                .map(|i| (0..n).map(|j| self.mat[i * n + j] * lambda.0[j]).sum())
                .collect(),
        )
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// The permutation `σ` with `(w·λ)_i = λ_{σ(i)}`.
    pub fn permutation(&self) -> Vec<usize> {
        let n = self.n;
        (0..n)
            .map(|i| {
                (0..n)
                    .find(|&j| self.mat[i * n + j] != 0)
                    .expect("permutation matrix")
            })
            .collect()
    }
}

/// The finite Weyl group, stored by exhaustive enumeration.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    generators: Vec<WeylElement>,
}

impl WeylGroup {
    fn generate(datum: &BasedRootDatum) -> Self {
        let n = datum.dim();
        let generators: Vec<WeylElement> = datum
            .simple_roots()
            .map(|a| WeylElement::reflection(n, &a.root))
            .collect();
        let id = WeylElement::identity(n);
        let mut seen: HashSet<WeylElement> = HashSet::from([id.clone()]);
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(w) = queue.pop_front() {
            for s in &generators {
                let sw = s.compose(&w);
                if seen.insert(sw.clone()) {
                    elements.push(sw.clone());
                    queue.push_back(sw);
                }
            }
        }
        Self {
            elements,
            generators,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[WeylElement] {
        &self.generators
    }

    pub fn orbit(&self, lambda: &Cocharacter) -> Vec<Cocharacter> {
        let mut out: Vec<Cocharacter> = self.elements.iter().map(|w| w.apply(lambda)).collect();
        out.sort();
        out.dedup();
        out
    }
}
