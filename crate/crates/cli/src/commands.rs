use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use hecke_core::cosets::DoubleCosetId;
use hecke_core::error::Error;
use hecke_core::group::{GroupModel, LevelQuotient};
use hecke_core::hecke::{volume_closed_form, HeckeAlgebra, HeckeElem};
use hecke_core::residue::{EisensteinPoly, FieldConfig, TruncIso, TruncatedRing};
use hecke_core::root_datum::Cocharacter;
use hecke_core::transfer::TransferPlan;

use crate::config::RunConfig;
use crate::Failure;

/// Read the quotient from `path` if it exists, else enumerate and write it.
pub fn attach_cache(model: &GroupModel, path: &Path) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    if path.exists() {
        let q = LevelQuotient::read_cache(
            BufReader::new(File::open(path).map_err(io)?),
            model.quotient_ring().clone(),
            model.kind(),
            model.n(),
        )?;
        model.set_quotient(Arc::new(q))?;
    } else {
        let q = model.quotient()?;
        q.write_cache(BufWriter::new(File::create(path).map_err(io)?))?;
    }
    Ok(())
}

pub struct Output {
    dir: PathBuf,
}

impl Output {
    pub fn new(dir: &Path) -> Result<Self, Failure> {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
        })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), Failure> {
        let mut text =
            serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
        text.push('\n');
        self.text(name, &text)
    }

    fn text(&self, name: &str, text: &str) -> Result<(), Failure> {
        std::fs::write(self.path(name), text).map_err(|e| Failure::Io(format!("{name}: {e}")))
    }

    fn csv(
        &self,
        name: &str,
        header: &[&str],
        rows: impl IntoIterator<Item = Vec<String>>,
    ) -> Result<(), Failure> {
        let err = |e: csv::Error| Failure::Io(format!("{name}: {e}"));
        let mut w = csv::Writer::from_path(self.path(name)).map_err(err)?;
        w.write_record(header).map_err(err)?;
        for row in rows {
            w.write_record(&row).map_err(err)?;
        }
        w.flush().map_err(|e| Failure::Io(format!("{name}: {e}")))
    }
}

fn census(h: &HeckeAlgebra, window: &[Cocharacter]) -> Result<Vec<DoubleCosetId>, Failure> {
    let mut ids = Vec::new();
    for l in window {
        ids.extend(h.cosets().census(l)?);
    }
    Ok(ids)
}

fn check_pairs(cfg: &RunConfig, what: &str, pairs: u64) -> Result<(), Failure> {
    let limit = cfg.guards.pairs();
    if pairs > limit {
        return Err(Error::Guard {
            what: what.into(),
            size: pairs,
            limit,
        }
        .into());
    }
    Ok(())
}

// ---------------------------------------------------------------------------

pub fn enumerate(cfg: &RunConfig, out: &Output) -> Result<String, Failure> {
    let c = cfg.cosets(cfg.descriptor()?, 1)?;
    let g = c.model().clone();
    let q = g.quotient()?.clone();
    let window = cfg.window(g.spec())?;
    let r = q.ring().clone();
    out.csv(
        "quotient.csv",
        &["index", "entries"],
        (0..q.len() as u32).map(|i| {
            let m: Vec<String> = q.matrix(i).into_iter().map(|x| r.format(x)).collect();
            vec![i.to_string(), m.join(" ")]
        }),
    )?;
    q.write_cache(BufWriter::new(
        File::create(out.path("quotient.hklq")).map_err(|e| Failure::Io(e.to_string()))?,
    ))?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for l in &window {
        let ids = c.census(l)?;
        let gamma = c.stabilizer(l)?;
        let vol = c.volume(&DoubleCosetId {
            lambda: l.clone(),
            a: 0,
            b: 0,
        });
        summary.push(
            json!({"lambda": l, "orbits": ids.len(), "stabilizer": gamma.order(), "volume": vol}),
        );
        rows.extend(ids.into_iter().map(|id| {
            vec![
                id.lambda.to_string(),
                id.a.to_string(),
                id.b.to_string(),
                vol.to_string(),
            ]
        }));
    }
    out.csv("census.csv", &["lambda", "a", "b", "volume"], rows)?;
    out.json(
        "summary.json",
        &json!({"group": g.spec().name(), "m": g.m(), "quotient_order": q.len(), "lambdas": summary}),
    )?;
    Ok(format!(
        "{}: |K/K_m| = {}, {} invariants enumerated",
        g.spec().name(),
        q.len(),
        window.len()
    ))
}

pub fn volume(cfg: &RunConfig, out: &Output) -> Result<String, Failure> {
    let c = cfg.cosets(cfg.descriptor()?, 1)?;
    let g = c.model().clone();
    let e = g.spec().rel_e() as i64;
    let datum = g.datum().clone();
    let q = g.spec().base_q();
    let mut rows = Vec::new();
    let mut bad = 0;
    for l in cfg.window(g.spec())? {
        // The window is in matrix-ring units; μ is the F-rational cocharacter.
        let mu = Cocharacter(l.0.iter().map(|x| x / e).collect());
        let closed = volume_closed_form(&datum, q, &mu);
        let x = g.pi_f_rational(&mu)?;
        let x_inv = g.pi_f_rational(&mu.scale(-1))?;
        let brute = c.right_coset_reps_brute_of(&x, &x_inv)?.len() as u64;
        bad += (closed != brute) as usize;
        rows.push(vec![
            mu.to_string(),
            closed.to_string(),
            brute.to_string(),
            (closed == brute).to_string(),
        ]);
    }
    let n = rows.len();
    out.csv(
        "volume.csv",
        &["lambda", "closed_form", "brute_force", "match"],
        rows,
    )?;
    if bad > 0 {
        return Err(Failure::Audit(format!(
            "{bad} of {n} volumes disagree with the closed form"
        )));
    }
    Ok(format!(
        "{}: {n} volumes match the closed form",
        g.spec().name()
    ))
}

pub fn convolve(
    cfg: &RunConfig,
    out: &Output,
    left: Option<&Path>,
    right: Option<&Path>,
) -> Result<String, Failure> {
    let h = HeckeAlgebra::new(cfg.cosets(cfg.descriptor()?, 2)?);
    if let (Some(l), Some(r)) = (left, right) {
        let read = |p: &Path| -> Result<HeckeElem, Failure> {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            let v = serde_json::from_str(&text)
                .map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?;
            Ok(HeckeElem::from_json(&v)?)
        };
        let prod = h.convolve(&read(l)?, &read(r)?)?;
        out.json("product.json", &prod.to_json())?;
        return Ok(format!("product has {} terms", prod.len()));
    }
    let ids = census(&h, &cfg.window(h.model().spec())?)?;
    check_pairs(cfg, "basis pairs", (ids.len() as u64).pow(2))?;
    let pairs: Vec<(&DoubleCosetId, &DoubleCosetId)> = ids
        .iter()
        .flat_map(|x| ids.iter().map(move |y| (x, y)))
        .collect();
    let products = pairs
        .par_iter()
        .map(|&(x, y)| h.product_basis(x, y))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for ((x, y), p) in pairs.iter().zip(&products) {
        for (z, c) in p.iter() {
            rows.push(vec![
                x.to_string(),
                y.to_string(),
                z.to_string(),
                c.to_string(),
            ]);
        }
    }
    let n = rows.len();
    out.csv("structure_constants.csv", &["x", "y", "z", "c"], rows)?;
    Ok(format!(
        "{}: {} basis pairs, {n} structure constants",
        h.model().spec().name(),
        pairs.len()
    ))
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    count: usize,
    failures: Vec<String>,
}

pub fn verify(cfg: &RunConfig, out: &Output) -> Result<String, Failure> {
    let h = HeckeAlgebra::new(cfg.cosets(cfg.descriptor()?, 3)?);
    let g = h.model().clone();
    let window = cfg.window(g.spec())?;
    let ids = census(&h, &window)?;
    let q = g.quotient()?.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();

    let conv =
        |x: &HeckeElem, y: &HeckeElem, fails: &mut Vec<String>| -> Result<HeckeElem, Failure> {
            let p = h.convolve(x, y)?;
            if h.mass(&p) != h.mass(x) * h.mass(y) {
                fails.push(format!(
                    "mass not conserved in {:?} * {:?}",
                    x.terms().keys().collect::<Vec<_>>(),
                    y.terms().keys().collect::<Vec<_>>()
                ));
            }
            Ok(p)
        };

    let one = h.unit()?;
    let mut fails = Vec::new();
    for id in &ids {
        let t = HeckeElem::basis(g.m(), id.clone());
        if conv(&one, &t, &mut fails)? != t || conv(&t, &one, &mut fails)? != t {
            fails.push(format!("unit fails at {id}"));
        }
    }
    checks.push(Check {
        name: "unit and mass",
        count: ids.len(),
        failures: fails,
    });

    let mut fails = Vec::new();
    let mut count = 0;
    for a in &window {
        for b in &window {
            let lhs = conv(&h.pi_basis(a)?, &h.pi_basis(b)?, &mut fails)?;
            if lhs != h.pi_basis(&a.add(b))? {
                fails.push(format!("h(π_{a}) * h(π_{b}) ≠ h(π_{{{}}})", a.add(b)));
            }
            count += 1;
        }
    }
    checks.push(Check {
        name: "chamber additivity",
        count,
        failures: fails,
    });

    let mut fails = Vec::new();
    let len = q.len() as u32;
    let grid = (len as u64).pow(2) * window.len() as u64;
    let sandwich =
        |l: &Cocharacter, a: u32, b: u32, fails: &mut Vec<String>| -> Result<(), Failure> {
            match h.conjugate_sandwich(&g.lift(a)?, l, &g.lift(b)?) {
                Ok(_) => Ok(()),
                Err(Error::Consistency(msg)) => {
                    fails.push(format!("({a}, {b}): {msg}"));
                    Ok(())
                }
                Err(e) => Err(e.into()),
            }
        };
    let count = if grid <= cfg.guards.pairs() {
        for l in &window {
            for a in 0..len {
                for b in 0..len {
                    sandwich(l, a, b, &mut fails)?;
                }
            }
        }
        grid as usize
    } else {
        let n = cfg.guards.pairs() as usize;
        for _ in 0..n {
            let l = &window[rng.gen_range(0..window.len())];
            sandwich(l, rng.gen_range(0..len), rng.gen_range(0..len), &mut fails)?;
        }
        n
    };
    checks.push(Check {
        name: "sandwich grid",
        count,
        failures: fails,
    });

    let mut fails = Vec::new();
    let triples = if ids.is_empty() { 0 } else { cfg.triples };
    for _ in 0..triples {
        let mut pick = || HeckeElem::basis(g.m(), ids[rng.gen_range(0..ids.len())].clone());
        let (x, y, z) = (pick(), pick(), pick());
        let left = conv(&conv(&x, &y, &mut fails)?, &z, &mut fails)?;
        let right = conv(&x, &conv(&y, &z, &mut fails)?, &mut fails)?;
        if left != right {
            fails.push(format!(
                "associativity fails for {:?}",
                [&x, &y, &z].map(|t| t.terms().keys().next().unwrap().to_string())
            ));
        }
    }
    checks.push(Check {
        name: "associativity",
        count: triples,
        failures: fails,
    });

    let mut fails = Vec::new();
    let gens = g.datum().semigroup_generators();
    for id in &ids {
        if !h.certify(id, &gens)?.verified {
            fails.push(format!("generator factorization of {id} fails"));
        }
    }
    checks.push(Check {
        name: "generator certificates",
        count: ids.len(),
        failures: fails,
    });

    let failed: usize = checks.iter().map(|c| c.failures.len()).sum();
    out.json(
        "verify.json",
        &json!({"group": g.spec().name(), "m": g.m(), "window": window, "checks": checks}),
    )?;
    let summary: Vec<String> = checks
        .iter()
        .map(|c| {
            format!(
                "{} {}/{}",
                c.name,
                c.count - c.failures.len().min(c.count),
                c.count
            )
        })
        .collect();
    if failed > 0 {
        return Err(Failure::Audit(format!(
            "{failed} identity failures: {}",
            summary.join(", ")
        )));
    }
    Ok(format!("{}: {}", g.spec().name(), summary.join(", ")))
}

/// Window plus every antidominant invariant a product of two window elements can have.
fn product_closure(h: &HeckeAlgebra, window: &[Cocharacter]) -> Vec<Cocharacter> {
    let datum = h.model().datum();
    let bound = window.iter().map(|l| l.sup_norm()).max().unwrap_or(0);
    let spread = window.iter().map(|l| l.spread()).max().unwrap_or(0);
    let mut out: Vec<Cocharacter> = datum
        .antidominant_box(2 * bound)
        .into_iter()
        .filter(|l| l.spread() <= 2 * spread)
        .collect();
    out.extend(window.iter().cloned());
    out.sort();
    out.dedup();
    out
}

pub fn transfer(cfg: &RunConfig, out: &Output) -> Result<String, Failure> {
    let (f, f2) = (cfg.descriptor()?, cfg.target_descriptor()?);
    let hs = Arc::new(HeckeAlgebra::new(cfg.cosets(f.clone(), 2)?));
    let ht = Arc::new(HeckeAlgebra::new(cfg.cosets(f2.clone(), 2)?));
    let l = cfg.l.unwrap_or(hs.model().km_level());
    let descriptors = json!({
        "source": FieldConfig::from_descriptor(&f, None),
        "target": FieldConfig::from_descriptor(&f2, None),
    });
    let window = cfg.window(hs.model().spec())?;
    let probe = |detail: String| -> Result<String, Failure> {
        out.json("transfer.json", &json!({"l": l, "m": cfg.m, "backends": descriptors, "outcome": "not close", "detail": detail}))?;
        if cfg.theorem_applicable {
            Err(Failure::Audit(format!(
                "fields not close enough at level {l}: {detail}"
            )))
        } else {
            Ok(format!("probe at l = {l}: not close ({detail})"))
        }
    };
    let psi = match (TruncatedRing::new(f, l), TruncatedRing::new(f2, l)) {
        (Ok(a), Ok(b)) => match TruncIso::aligned(Arc::new(a), Arc::new(b)) {
            Ok(psi) => psi,
            Err(e) => return probe(format!("no truncation isomorphism: {e}")),
        },
        (Err(e), _) | (_, Err(e)) => return Err(Error::from(e).into()),
    };
    let closure = product_closure(&hs, &window);
    let plan = match TransferPlan::build(hs.clone(), ht.clone(), &psi, &closure, cfg.seed) {
        Ok(p) => p,
        Err(Error::NotClose { detail, .. }) => return probe(detail),
        Err(e) => return Err(e.into()),
    };
    let ids = census(&hs, &window)?;
    check_pairs(cfg, "transfer pairs", (ids.len() as u64).pow(2))?;
    let report = plan.compare_structure_constants(&ids)?;
    let mut value = serde_json::to_value(&report).map_err(|e| Failure::Io(e.to_string()))?;
    value["backends"] = descriptors;
    value["outcome"] = json!(if report.is_clean() {
        "match"
    } else {
        "mismatch"
    });
    out.json("transfer.json", &value)?;
    out.text("transfer.txt", &report.to_string())?;
    let summary = format!(
        "{} pairs, {} mismatches (l = {l}, m = {})",
        report.pairs_checked,
        report.mismatches.len(),
        cfg.m
    );
    if !report.is_clean() && cfg.theorem_applicable {
        return Err(Failure::Mismatch(summary));
    }
    Ok(summary)
}

pub fn eisenstein(cfg: &RunConfig, out: &Output) -> Result<String, Failure> {
    let (f, f2) = (cfg.descriptor()?, cfg.target_descriptor()?);
    let m = cfg.m;
    let up = TruncatedRing::new(f, m + 1).map_err(Error::from)?;
    let coeffs = cfg
        .eisenstein
        .iter()
        .map(|s| {
            let s = s.trim();
            if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                let c: Vec<i64> = inner
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<i64>()
                            .map_err(|e| Failure::Config(format!("coordinate {x:?}: {e}")))
                    })
                    .collect::<Result<_, _>>()?;
                Ok(up.from_coords(&c))
            } else {
                s.parse::<i64>()
                    .map(|n| up.from_int(n))
                    .map_err(|e| Failure::Config(format!("coefficient {s:?}: {e}")))
            }
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let poly = EisensteinPoly::from_coefficients(&up, &coeffs).map_err(Error::from)?;
    let psi = TruncIso::aligned(
        poly.ring().clone(),
        Arc::new(TruncatedRing::new(f2, m).map_err(Error::from)?),
    )
    .map_err(Error::from)?;
    let image = poly.transfer(&psi).map_err(Error::from)?;
    let mut report = BTreeMap::new();
    report.insert("m", json!(m));
    report.insert("input", json!(poly.to_string()));
    report.insert("image", json!(image.to_string()));
    out.json("eisenstein.json", &report)?;
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "{poly} ↦ {image}").ok();
    Ok(format!(
        "transferred a degree {} polynomial at m = {m}",
        image.degree()
    ))
}
