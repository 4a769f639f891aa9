mod common;

use common::random_jacobi;
use liecat_core::cochain::transform;
use liecat_core::cohomology::{betti_rational, center, series_invariants};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn euler_identity_on_random_structures() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let d = random_jacobi(&mut rng);
        let r = betti_rational(&d).unwrap();
        assert_eq!(r.euler_characteristic(), 0, "{d}");
        assert_eq!(r.betti[0], center(&d).unwrap(), "{d}");
    }
}

#[test]
fn invariants_survive_change_of_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let d = random_jacobi(&mut rng);
        let g = common::invertible(&mut rng, d.dim());
        let moved = transform(&d, &g).unwrap();
        assert_eq!(series_invariants(&d).unwrap(), series_invariants(&moved).unwrap(), "{d}");
    }
}
