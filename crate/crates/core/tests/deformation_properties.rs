mod common;

use common::invertible;
use liecat_core::catalog;
use liecat_core::cochain::transform;
use liecat_core::deformation::{beta_components, iso_witness_search, versal, DEFAULT_BUDGET};
use liecat_core::scalar::Point;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every parameter-free entry of dimension 3 and 4 plus the fixed points of
/// the 3- and 4-dimensional families.
fn small_structures() -> Vec<(String, liecat_core::cochain::Codifferential<common::Q>)> {
    let mut out = Vec::new();
    for t in ["3", "4"] {
        for def in catalog::list(t) {
            if def.params.is_empty() {
                out.push((def.id.clone(), def.at(&Point::new()).unwrap()));
            }
            for sp in &def.special_points {
                if let Some(p) = sp.as_point(&def.params) {
                    out.push((format!("{}{}", def.id, sp.name), def.at(&p).unwrap()));
                }
            }
        }
    }
    out
}

#[test]
fn versal_solutions_kill_beta_and_tau_lies_in_the_ideal() {
    for (id, d) in small_structures() {
        let v = versal(&d, 3).unwrap();
        let s = beta_components(&v.prebases, &v.x_solutions, 3);
        assert!(s.iter().all(|c| c.is_zero()), "{id}");
        assert!(v.ideal_checks.iter().all(|c| c.holds), "{id}: {v}");
        assert_eq!(v.relations.len(), v.prebases.alpha.len(), "{id}");
    }
}

#[test]
fn versal_is_deterministic() {
    let d =
        catalog::by_id("3.d2").unwrap().at(&[("p".into(), common::q(0)), ("q".into(), common::q(0))].into()).unwrap();
    assert_eq!(versal(&d, 3).unwrap().to_string(), versal(&d, 3).unwrap().to_string());
}

/// The search is aimed at nilpotent structures, which it recovers from
/// random changes of basis.
#[test]
fn witness_search_recovers_random_changes_of_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for def in catalog::nilpotent_table() {
        let d = def.at(&Point::new()).unwrap();
        for _ in 0..3 {
            let g = invertible(&mut rng, d.dim());
            let moved = transform(&d, &g).unwrap();
            let w = iso_witness_search(&d, &moved, DEFAULT_BUDGET, 0).unwrap_or_else(|e| panic!("{}: {e}", def.id));
            assert_eq!(transform(&d, &w).unwrap(), moved);
        }
    }
}
