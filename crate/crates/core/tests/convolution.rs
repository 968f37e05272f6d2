//! Convolution against a dense oracle that only uses membership in `K_m`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hecke_core::cosets::{Cosets, DoubleCosetId};
use hecke_core::group::{working_level, GroupElem, GroupModel, GroupSpec};
use hecke_core::hecke::{Coeff, HeckeAlgebra};
use hecke_core::residue::FieldDescriptor;
use hecke_core::root_datum::{Cocharacter, FamilyKind};

/// Right cosets `r_i K_m` of `K_m x K_m`, with the inverses `r_i^{-1}`.
fn brute(c: &Cosets, x: &GroupElem) -> Vec<(GroupElem, GroupElem)> {
    let g = c.model();
    let x_inv = g.inv(x).unwrap();
    c.right_coset_reps_brute_of(x, &x_inv)
        .unwrap()
        .into_iter()
        .map(|r| {
            let r_inv = g.inv(&r).unwrap();
            (r, r_inv)
        })
        .collect()
}

fn member(c: &Cosets, reps: &[(GroupElem, GroupElem)], z: &GroupElem) -> bool {
    let g = c.model();
    reps.iter()
        .any(|(_, r_inv)| g.in_km(&g.mul(r_inv, z).unwrap()).unwrap())
}

/// `(t_x * t_y)(z) = #{i : x_i^{-1} z ∈ K_m y K_m}`.
fn oracle_coefficient(
    c: &Cosets,
    xs: &[(GroupElem, GroupElem)],
    ys: &[(GroupElem, GroupElem)],
    z: &GroupElem,
) -> u64 {
    let g = c.model();
    xs.iter()
        .filter(|(_, xi_inv)| member(c, ys, &g.mul(xi_inv, z).unwrap()))
        .count() as u64
}

fn check(
    kind: FamilyKind,
    field: FieldDescriptor,
    window: &[Cocharacter],
    pairs: usize,
    seed: u64,
) {
    let spec = GroupSpec::split(kind, 2, field).unwrap();
    let level = working_level(&spec, 1, 4);
    let h = HeckeAlgebra::from_model(GroupModel::new(spec, 1, level).unwrap());
    let c = h.cosets().clone();
    let len = h.model().quotient().unwrap().len() as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = || {
        let l = &window[rng.gen_range(0..window.len())];
        c.id_of_pair(l, rng.gen_range(0..len), rng.gen_range(0..len))
            .unwrap()
    };
    for _ in 0..pairs {
        let (x, y): (DoubleCosetId, DoubleCosetId) = (pick(), pick());
        let (rx, ry) = (c.representative(&x).unwrap(), c.representative(&y).unwrap());
        let (xs, ys) = (brute(&c, &rx), brute(&c, &ry));
        let fast = h.product_basis(&x, &y).unwrap();
        // Every label in the support gets the oracle's coefficient; the masses then
        // force the support to be complete.
        let mut mass = 0;
        for (z, &n) in fast.iter() {
            let rz = c.representative(z).unwrap();
            assert_eq!(
                oracle_coefficient(&c, &xs, &ys, &rz),
                n as u64,
                "{x} * {y} at {z}"
            );
            mass += n as u64 * h.closed_form_volume(&z.lambda);
        }
        assert_eq!(mass, xs.len() as u64 * ys.len() as u64);
        // Labels of the products x_i·y_j are exactly the support.
        let hit: std::collections::BTreeSet<_> = xs
            .iter()
            .flat_map(|(xi, _)| {
                ys.iter()
                    .map(|(yj, _)| c.canonical_id(&h.model().mul(xi, yj).unwrap()).unwrap())
            })
            .collect();
        assert!(hit.iter().eq(fast.keys()));
        let prod = h
            .convolve(&h.basis(&rx).unwrap(), &h.basis(&ry).unwrap())
            .unwrap();
        assert_eq!(
            h.mass(&prod),
            Coeff::from_integer((h.volume(&x) * h.volume(&y)) as i64)
        );
    }
}

fn lam(v: &[i64]) -> Cocharacter {
    Cocharacter(v.to_vec())
}

#[test]
fn sl2_q2_matches_dense_oracle() {
    check(
        FamilyKind::Sl,
        FieldDescriptor::unramified(2, 1).unwrap(),
        &[lam(&[0, 0]), lam(&[-1, 1])],
        25,
        1,
    );
}

#[test]
fn sl2_laurent_p3_matches_dense_oracle() {
    check(
        FamilyKind::Sl,
        FieldDescriptor::equal(3, 1).unwrap(),
        &[lam(&[0, 0]), lam(&[-1, 1])],
        10,
        2,
    );
}

#[test]
fn gl2_laurent_p2_matches_dense_oracle() {
    check(
        FamilyKind::Gl,
        FieldDescriptor::equal(2, 1).unwrap(),
        &[lam(&[0, 0]), lam(&[-1, 0]), lam(&[-1, 1]), lam(&[0, 1])],
        25,
        3,
    );
}
