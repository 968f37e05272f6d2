//! Field descriptors: which non-archimedean local field a truncated ring models.

use serde::{Deserialize, Serialize};

use super::RingError;

/// Characteristic of the modelled local field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    /// Finite extension of `Q_p`.
    Mixed,
    /// `F_q((t))`.
    Equal,
}

/// Monic irreducible polynomials defining `F_q = F_p[y]/(g(y))`, little-endian.
const RESIDUE_TABLE: &[(u32, u32, &[i64])] = &[
    (2, 1, &[0, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (3, 1, &[0, 1]),
    (3, 2, &[1, 0, 1]),
    (5, 1, &[0, 1]),
    (7, 1, &[0, 1]),
];

/// The irreducible polynomial used for `F_{p^f}`, if the table has one.
pub fn residue_polynomial(p: u32, f: u32) -> Option<&'static [i64]> {
    RESIDUE_TABLE
        .iter()
        .find(|(tp, tf, _)| *tp == p && *tf == f)
        .map(|(_, _, g)| *g)
}

/// Exhaustive irreducibility test over `F_p` for polynomials of degree at most 3:
/// such a polynomial is reducible iff it has a root.
pub fn is_irreducible_small(p: u32, g: &[i64]) -> bool {
    let deg = g.len().saturating_sub(1);
    if deg == 0 || deg > 3 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    let p = p as i64;
    !(0..p).any(|r| {
        let v = g
            .iter()
            .rev()
            .fold(0i64, |acc, &c| (acc * r + c).rem_euclid(p));
        v == 0
    })
}

/// A local field `F` given by residue characteristic, residue degree and,
/// in mixed characteristic, an Eisenstein polynomial over the unramified base.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    kind: FieldKind,
    p: u32,
    f: u32,
    /// Monic Eisenstein polynomial, little-endian integer coefficients (mixed only).
    eisenstein: Vec<i64>,
    residue_poly: Vec<i64>,
}

fn is_small_prime(p: u32) -> bool {
    matches!(p, 2 | 3 | 5 | 7)
}

fn p_adic_valuation(mut x: i64, p: i64) -> Option<u32> {
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

impl FieldDescriptor {
    /// `F_q((t))` with `q = p^f`.
    pub fn equal(p: u32, f: u32) -> Result<Self, RingError> {
        Self::build(FieldKind::Equal, p, f, Vec::new())
    }

    /// The unramified extension of `Q_p` of degree `f`.
    pub fn unramified(p: u32, f: u32) -> Result<Self, RingError> {
        Self::build(FieldKind::Mixed, p, f, vec![-(p as i64), 1])
    }

    /// Totally ramified extension of the unramified base given by a monic
    /// Eisenstein polynomial (little-endian integer coefficients).
    pub fn mixed(p: u32, f: u32, eisenstein: Vec<i64>) -> Result<Self, RingError> {
        Self::build(FieldKind::Mixed, p, f, eisenstein)
    }

    fn build(kind: FieldKind, p: u32, f: u32, eisenstein: Vec<i64>) -> Result<Self, RingError> {
        if !is_small_prime(p) {
            return Err(RingError::InvalidDescriptor(format!(
                "residue prime {p} unsupported"
            )));
        }
        let g = residue_polynomial(p, f).ok_or_else(|| {
            RingError::InvalidDescriptor(format!("no residue field table entry for p={p}, f={f}"))
        })?;
        if !is_irreducible_small(p, g) {
            return Err(RingError::InvalidDescriptor(format!(
                "residue polynomial {g:?} reducible"
            )));
        }
        if kind == FieldKind::Mixed {
            Self::check_eisenstein(p, &eisenstein)?;
        }
        Ok(Self {
            kind,
            p,
            f,
            eisenstein,
            residue_poly: g.to_vec(),
        })
    }

    fn check_eisenstein(p: u32, e: &[i64]) -> Result<(), RingError> {
        let p = p as i64;
        let bad = |msg: &str| {
            Err(RingError::InvalidDescriptor(format!(
                "eisenstein {e:?}: {msg}"
            )))
        };
        if e.len() < 2 {
            return bad("degree must be at least 1");
        }
        if *e.last().unwrap() != 1 {
            return bad("must be monic");
        }
        if e[..e.len() - 1].iter().any(|&a| a % p != 0) {
            return bad("lower coefficients must be divisible by p");
        }
        if p_adic_valuation(e[0], p) != Some(1) {
            return bad("constant term must have valuation exactly 1");
        }
        Ok(())
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    /// Residue field size.
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.f)
    }

    /// Absolute ramification index; `None` for equal characteristic.
    pub fn ramification(&self) -> Option<u32> {
        match self.kind {
            FieldKind::Mixed => Some(self.eisenstein.len() as u32 - 1),
            FieldKind::Equal => None,
        }
    }

    pub fn eisenstein(&self) -> &[i64] {
        &self.eisenstein
    }

    pub fn residue_poly(&self) -> &[i64] {
        &self.residue_poly
    }

    pub fn describe(&self) -> String {
        let q = self.q();
        match self.kind {
            FieldKind::Equal => format!("F_{q}((t))"),
            FieldKind::Mixed => {
                let e = self.ramification().unwrap();
                if e == 1 {
                    if self.f == 1 {
                        format!("Q_{}", self.p)
                    } else {
                        format!("Q_{}^ur({})", self.p, self.f)
                    }
                } else {
                    format!(
                        "Q_{}^ur({})[x]/({})",
                        self.p,
                        self.f,
                        poly_string(&self.eisenstein, "x")
                    )
                }
            }
        }
    }
}

pub(crate) fn poly_string(c: &[i64], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let t = if i == 0 {
            a.to_string()
        } else if a == 1 {
            mono
        } else if a == -1 {
            format!("-{mono}")
        } else {
            format!("{a}{mono}")
        };
        terms.push(t);
    }
    if terms.is_empty() {
        return "0".into();
    }
    terms.join(" + ").replace("+ -", "- ")
}

/// JSON form of a field descriptor with an optional default level.
///
/// `{"kind":"mixed","p":2,"f":1,"eisenstein":["-2","0","0","0","1"],"level":4}`;
/// the Eisenstein list is little-endian, monic and includes the leading `"1"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub kind: FieldKind,
    pub p: u32,
    #[serde(default = "one")]
    pub f: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eisenstein: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
}

fn one() -> u32 {
    1
}

impl FieldConfig {
    pub fn descriptor(&self) -> Result<FieldDescriptor, RingError> {
        match self.kind {
            FieldKind::Equal => {
                if !self.eisenstein.is_empty() {
                    return Err(RingError::InvalidDescriptor(
                        "equal-characteristic fields take no eisenstein polynomial".into(),
                    ));
                }
                FieldDescriptor::equal(self.p, self.f)
            }
            FieldKind::Mixed => {
                if self.eisenstein.is_empty() {
                    return FieldDescriptor::unramified(self.p, self.f);
                }
                let coeffs = self
                    .eisenstein
                    .iter()
                    .map(|s| {
                        s.trim().parse::<i64>().map_err(|_| {
                            RingError::InvalidDescriptor(format!("bad integer coefficient {s:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                FieldDescriptor::mixed(self.p, self.f, coeffs)
            }
        }
    }

    pub fn from_descriptor(d: &FieldDescriptor, level: Option<u32>) -> Self {
        let eisenstein = match d.kind() {
            FieldKind::Mixed if d.ramification() != Some(1) => {
                d.eisenstein().iter().map(|c| c.to_string()).collect()
            }
            _ => Vec::new(),
        };
        Self {
            kind: d.kind(),
            p: d.p(),
            f: d.f(),
            eisenstein,
            level,
        }
    }
}
