//! Generators shared by the integration tests.
#![allow(dead_code)]

use liecat_core::catalog;
use liecat_core::cochain::{basis, transform, BasisTerm, Cochain, Codifferential};
use liecat_core::extension::{algebra_from_matrix, ExtensionData};
use liecat_core::scalar::{Field, Matrix, Point};
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

/// Nonzero with probability `density`, then uniform in {-2,-1,1,2}.
pub fn sparse(rng: &mut ChaCha8Rng, density: f64) -> Q {
    if rng.gen_bool(density) {
        q([-2, -1, 1, 2][rng.gen_range(0..4)])
    } else {
        q(0)
    }
}

pub fn invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Q> {
    loop {
        let m = Matrix::from_rows((0..n).map(|_| (0..n).map(|_| q(rng.gen_range(-3..=3))).collect()).collect());
        if !Field::is_zero(&m.determinant()) {
            return m;
        }
    }
}

/// A catalog entry at a sampled point.
pub fn catalog_sample(rng: &mut ChaCha8Rng) -> Codifferential<Q> {
    let all = catalog::all();
    let def = &all[rng.gen_range(0..all.len())];
    let point: Point = catalog::sample_generic(def, rng.gen()).expect("catalog entries can be sampled");
    def.at(&point).expect("sampled point is valid")
}

/// A random structure satisfying Jacobi: a matrix algebra or a catalog
/// sample, moved by a random change of basis.
pub fn random_jacobi(rng: &mut ChaCha8Rng) -> Codifferential<Q> {
    let d = if rng.gen_bool(0.5) {
        let n = rng.gen_range(1..=4);
        let a = Matrix::from_rows((0..n).map(|_| (0..n).map(|_| sparse(rng, 0.5)).collect()).collect());
        algebra_from_matrix(&a).expect("square matrix")
    } else {
        catalog_sample(rng)
    };
    let g = invertible(rng, d.dim());
    transform(&d, &g).expect("same dimension")
}

/// Random cochain with sparse small coefficients.
pub fn random_cochain(rng: &mut ChaCha8Rng, n: usize, k: usize, density: f64) -> Cochain<Q> {
    let mut c = Cochain::zero(n, k);
    for t in basis(n, k) {
        c.add_term(t, sparse(rng, density));
    }
    c
}

#[derive(PartialEq)]
enum Piece {
    Mu,
    Delta,
    Lambda,
    Psi,
}

fn piece(t: &BasisTerm, m: usize) -> Option<Piece> {
    let ins_m = t.inputs().iter().filter(|&&i| i < m).count();
    match (ins_m, t.output() < m) {
        (2, true) => Some(Piece::Mu),
        (0, false) => Some(Piece::Delta),
        (1, true) => Some(Piece::Lambda),
        (0, true) => Some(Piece::Psi),
        _ => None,
    }
}

/// Random extension data with `M = ⟨e1..em⟩` and `W` the remaining
/// indices. `δ` and `ψ` are often zero so that valid and invalid data
/// both occur.
pub fn random_extension(rng: &mut ChaCha8Rng, m: usize, w: usize) -> ExtensionData<Q> {
    let n = m + w;
    let density = [0.15, 0.3, 0.6][rng.gen_range(0..3)];
    let keep_delta = rng.gen_bool(0.5);
    let keep_psi = rng.gen_bool(0.5);
    let mut fill = |which: Piece, on: bool| {
        let mut c = Cochain::zero(n, 2);
        for t in basis(n, 2) {
            if on && piece(&t, m).as_ref() == Some(&which) {
                c.add_term(t, sparse(rng, density));
            }
        }
        c
    };
    let mu = fill(Piece::Mu, true);
    let delta = fill(Piece::Delta, keep_delta);
    let lambda = fill(Piece::Lambda, true);
    let psi = fill(Piece::Psi, keep_psi);
    ExtensionData::new(m, w, mu, delta, lambda, psi).expect("pieces respect the index ranges")
}
