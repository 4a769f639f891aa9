use liecat_core::catalog;
use liecat_core::cochain::{nr_bracket, Cochain};
use liecat_core::cohomology::coboundary_matrix;
use liecat_core::tables::{table, Status};

#[test]
fn every_entry_satisfies_jacobi_symbolically() {
    for def in catalog::all() {
        assert!(def.structure.jacobi_check(), "{}", def.id);
    }
}

#[test]
fn coboundary_squares_to_zero() {
    for def in catalog::all() {
        let d = &def.structure;
        for k in 0..def.dim - 1 {
            let product = coboundary_matrix(d, k + 1).mul(&coboundary_matrix(d, k));
            assert!(product.is_zero(), "{} at degree {k}", def.id);
        }
    }
}

#[test]
fn bracket_with_identity_is_d() {
    for def in catalog::all() {
        let id = Cochain::identity(def.dim);
        assert_eq!(&nr_bracket(def.structure.as_cochain(), &id).unwrap(), def.structure.as_cochain(), "{}", def.id);
    }
}

#[test]
fn round_trip_through_text() {
    for def in catalog::all() {
        assert_eq!(&catalog::parse(&catalog::serialize(def)).unwrap(), def, "{}", def.id);
    }
}

#[test]
fn every_row_is_self_consistent() {
    for t in ["3", "4", "5", "nil"] {
        let report = table(t, 0).unwrap();
        for row in &report.rows {
            assert!(row.euler_ok, "{} {}", row.id, row.point);
            assert!(row.center_ok, "{} {}", row.id, row.point);
            if row.status == Status::Mismatch {
                assert!(row.expected.is_some());
            }
        }
    }
}

#[test]
fn tables_do_not_depend_on_the_seed() {
    for t in ["4", "5"] {
        let a = table(t, 0).unwrap();
        let b = table(t, 12345).unwrap();
        assert_eq!(a.rows.len(), b.rows.len());
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert_eq!(x.computed, y.computed, "{} {}", x.id, x.point);
        }
    }
}
