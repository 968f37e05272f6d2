//! JSON run configuration.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use hecke_core::cosets::Cosets;
use hecke_core::error::Error;
use hecke_core::group::{working_level, GroupModel, GroupSpec, KM_GUARD, QUOTIENT_GUARD};
use hecke_core::residue::{FieldConfig, FieldDescriptor};
use hecke_core::root_datum::{BasedRootDatum, Cocharacter, FamilyKind};

use crate::Failure;

/// Largest number of basis pairs a single run may convolve.
pub const PAIR_LIMIT: u64 = 250_000;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: FamilyKind,
    pub rank: usize,
    pub field: FieldConfig,
    /// Second backend, for `transfer` and `eisenstein`.
    #[serde(default)]
    pub target: Option<FieldConfig>,
    /// Treat `field` as E and work with `Res_{E/F}` over the prime base.
    #[serde(default)]
    pub restriction: bool,
    /// Ramification of E over F; only needed in equal characteristic.
    #[serde(default)]
    pub ramification: Option<u32>,
    #[serde(default = "one")]
    pub m: u32,
    /// Closeness level of the truncation isomorphism; defaults to the quotient level.
    #[serde(default)]
    pub l: Option<u32>,
    #[serde(default)]
    pub window: WindowSpec,
    #[serde(default)]
    pub guards: Guards,
    #[serde(default)]
    pub seed: u64,
    /// Quotient cache to read (if present) and write.
    #[serde(default)]
    pub cache: Option<String>,
    /// Whether transfer mismatches are failures (exit 4) or a recorded probe.
    #[serde(default = "yes")]
    pub theorem_applicable: bool,
    /// Random basis triples for the associativity check in `verify`.
    #[serde(default = "default_triples")]
    pub triples: usize,
    /// Lower coefficients `c_0..c_{d-1}` of a monic Eisenstein polynomial over `field`.
    #[serde(default)]
    pub eisenstein: Vec<String>,
}

fn one() -> u32 {
    1
}

fn yes() -> bool {
    true
}

fn default_triples() -> usize {
    20
}

/// Cartan invariants, either listed or as a box `‖λ‖ ≤ bound`, `max |⟨a,λ⟩| ≤ max_spread`.
/// Listed invariants of a restriction family are `F`-rational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WindowSpec {
    List(Vec<Vec<i64>>),
    Box { bound: i64, max_spread: i64 },
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec::Box {
            bound: 1,
            max_spread: 2,
        }
    }
}

impl std::str::FromStr for WindowSpec {
    type Err = String;

    /// `box:B:S`, `box:B`, or `-1,1;0,0`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("box:") {
            let parts: Vec<&str> = rest.split(':').collect();
            let num = |x: &str| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|e| format!("bad window bound {x:?}: {e}"))
            };
            return match parts.as_slice() {
                [b] => Ok(WindowSpec::Box {
                    bound: num(b)?,
                    max_spread: 2 * num(b)?,
                }),
                [b, sp] => Ok(WindowSpec::Box {
                    bound: num(b)?,
                    max_spread: num(sp)?,
                }),
                _ => Err(format!("bad window {s:?}")),
            };
        }
        if s.is_empty() {
            return Ok(WindowSpec::List(Vec::new()));
        }
        s.split(';')
            .map(|t| {
                t.trim()
                    .trim_matches(|c| c == '(' || c == ')')
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<i64>()
                            .map_err(|e| format!("bad window entry {x:?}: {e}"))
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()
            .map(WindowSpec::List)
    }
}

/// Overrides that may only lower the built-in hard maxima.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Guards {
    pub quotient: Option<u64>,
    pub km: Option<u64>,
    pub pairs: Option<u64>,
}

impl Guards {
    fn check(&self) -> Result<(), Failure> {
        for (name, v, max) in [
            ("quotient", self.quotient, QUOTIENT_GUARD),
            ("km", self.km, KM_GUARD),
            ("pairs", self.pairs, PAIR_LIMIT),
        ] {
            if v.is_some_and(|v| v > max) {
                return Err(Failure::Config(format!(
                    "guard {name} exceeds its hard maximum {max}"
                )));
            }
        }
        Ok(())
    }

    pub fn pairs(&self) -> u64 {
        self.pairs.unwrap_or(PAIR_LIMIT)
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Failure> {
        self.guards.check()?;
        if self.m == 0 {
            return Err(Failure::Config("m must be at least 1".into()));
        }
        Ok(())
    }

    pub fn descriptor(&self) -> Result<FieldDescriptor, Failure> {
        Ok(self.field.descriptor().map_err(Error::from)?)
    }

    pub fn target_descriptor(&self) -> Result<FieldDescriptor, Failure> {
        let t = self
            .target
            .as_ref()
            .ok_or_else(|| Failure::Config("this subcommand needs a target field".into()))?;
        Ok(t.descriptor().map_err(Error::from)?)
    }

    pub fn spec_for(&self, field: FieldDescriptor) -> Result<GroupSpec, Failure> {
        Ok(if self.restriction {
            GroupSpec::restriction(self.family, self.rank, field, self.ramification)?
        } else {
            GroupSpec::split(self.family, self.rank, field)?
        })
    }

    /// The window as Cartan invariants in matrix-ring units, antidominant and deduplicated.
    pub fn window(&self, spec: &GroupSpec) -> Result<Vec<Cocharacter>, Failure> {
        let datum: BasedRootDatum = spec.datum();
        let e = spec.rel_e() as i64;
        let raw = match &self.window {
            WindowSpec::Box { bound, max_spread } => datum.window(*bound, *max_spread),
            WindowSpec::List(list) => {
                let mut out = Vec::new();
                for v in list {
                    let l = Cocharacter(v.clone());
                    if l.len() != self.rank || !datum.in_lattice(&l) {
                        return Err(Failure::Config(format!(
                            "{l} is not in the cocharacter lattice"
                        )));
                    }
                    out.push(datum.antidominant_rep(&l).0);
                }
                out
            }
        };
        let mut out: Vec<Cocharacter> = raw.into_iter().map(|l| l.scale(e)).collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// A group model over `field` able to label products of `factors` window elements.
    pub fn model(&self, field: FieldDescriptor, factors: u32) -> Result<Arc<GroupModel>, Failure> {
        let spec = self.spec_for(field)?;
        let order = hecke_core::group::closed_form_order(
            spec.kind(),
            spec.n(),
            spec.field().q(),
            spec.rel_e() * self.m,
        );
        let limit = self.guards.quotient.unwrap_or(QUOTIENT_GUARD);
        if order > limit {
            return Err(Error::Guard {
                what: "quotient K/K_m".into(),
                size: order,
                limit,
            }
            .into());
        }
        let spread = self
            .window(&spec)?
            .iter()
            .map(|l| l.spread())
            .max()
            .unwrap_or(0) as u32;
        let level = working_level(&spec, self.m, factors.max(1) * spread);
        let model = Arc::new(GroupModel::new(spec, self.m, level)?);
        if let Some(path) = &self.cache {
            crate::commands::attach_cache(&model, Path::new(path))?;
        }
        Ok(model)
    }

    pub fn cosets(&self, field: FieldDescriptor, factors: u32) -> Result<Arc<Cosets>, Failure> {
        Ok(Arc::new(Cosets::new(self.model(field, factors)?)))
    }
}
