mod common;

use common::{q, random_extension, Q};
use liecat_core::catalog;
use liecat_core::cohomology::betti_rational;
use liecat_core::extension::{
    assemble_extension, excluded_form, projective_eq, symmetry_map, ExtensionError, SymmetryMap, SYMMETRIC_FAMILIES,
};
use liecat_core::scalar::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn jacobi_iff_extension_conditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (m, w) in [(1, 4), (2, 3), (1, 3)] {
        let (mut valid, mut invalid) = (0, 0);
        for _ in 0..100 {
            let data = random_extension(&mut rng, m, w);
            let conditions = data.failing_condition().unwrap().is_none();
            assert_eq!(data.sum().unwrap().jacobi_check(), conditions, "({m},{w}) {}", data.sum().unwrap());
            match assemble_extension(&data) {
                Ok(d) => {
                    assert!(conditions);
                    assert!(d.jacobi_check());
                    valid += 1;
                }
                Err(ExtensionError::ConditionFailed(_)) => {
                    assert!(!conditions);
                    invalid += 1;
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert!(valid >= 10 && invalid >= 10, "({m},{w}): {valid} valid, {invalid} invalid");
    }
}

fn valid_points(family: &str, count: usize, seed: u64) -> Vec<Vec<Q>> {
    let arity = if family.ends_with("d5") { 3 } else { 2 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let x: Vec<Q> = (0..arity).map(|_| q(rng.gen_range(-20..=20))).collect();
        if excluded_form(family, &x).unwrap().is_none() {
            out.push(x);
        }
    }
    out
}

#[test]
fn symmetry_group_relations() {
    for family in SYMMETRIC_FAMILIES {
        let s = |v: &[Q]| symmetry_map(family, SymmetryMap::Sigma, v).unwrap();
        let t = |v: &[Q]| symmetry_map(family, SymmetryMap::Tau, v).unwrap();
        for x in valid_points(family, 20, 1) {
            assert!(projective_eq(&t(&t(&x)), &x), "{family} tau^2");
            assert!(projective_eq(&s(&s(&s(&x))), &x), "{family} sigma^3");
            assert!(projective_eq(&s(&t(&x)), &t(&s(&s(&x)))), "{family} sigma tau");
            assert!(excluded_form(family, &s(&x)).unwrap().is_none(), "{family} orbit leaves the domain");
        }
    }
}

#[test]
fn betti_numbers_are_constant_on_orbits() {
    for family in SYMMETRIC_FAMILIES {
        let def = catalog::by_id(family).unwrap();
        let betti = |x: &[Q]| {
            let point: Point = def.params.iter().cloned().zip(x.iter().cloned()).collect();
            betti_rational(&def.at(&point).unwrap()).unwrap().betti
        };
        let special = def
            .special_points
            .iter()
            .filter_map(|sp| sp.as_point(&def.params))
            .map(|p| def.params.iter().map(|n| p[n].clone()).collect::<Vec<Q>>())
            .filter(|x| excluded_form(family, x).unwrap().is_none());
        for x in valid_points(family, 5, 2).into_iter().chain(special) {
            let image = symmetry_map(family, SymmetryMap::Sigma, &x).unwrap();
            assert_eq!(betti(&x), betti(&image), "{family} at {x:?}");
        }
    }
}
