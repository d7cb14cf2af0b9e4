//! Frozen Betti tables for the classical small models, plus the duality
//! comparison between plain q=2 cells and the twisted strand dimensions.

use nodal_koszul::koszul::{betti_table, twisted_k00};
use nodal_koszul::runner::{builtin_model, Cell};

fn row(t: &nodal_koszul::BettiTable, q: i64) -> Vec<usize> {
    (0..=t.r).map(|p| t.k(p, q).unwrap()).collect()
}

#[test]
fn elliptic_normal_quintic_table() {
    let m = builtin_model("cycle-genus-1(5)", 3).unwrap();
    let t = betti_table(&m.curve, &m.bundle).unwrap();
    assert_eq!(t.r, 4);
    assert_eq!(row(&t, 0), vec![1, 0, 0, 0, 0]);
    assert_eq!(row(&t, 1), vec![0, 5, 5, 0, 0]);
    assert_eq!(row(&t, 2), vec![0, 0, 0, 1, 0]);
    assert_eq!(row(&t, 3), vec![0, 0, 0, 0, 0]);
    // the k_{r−1,2} cell equals the Brill–Noether number of the cell
    let cell = Cell { g: 1, r: 4, d: 5, p: None };
    assert_eq!(t.k(t.r - 1, 2).unwrap() as i64, cell.rho());
}

#[test]
fn canonical_genus_four_table() {
    // the (2,3) complete-intersection shape: one quadric, one cubic
    // generator, and the h¹ cell at (r−1, 3)
    let m = builtin_model("canonical-graph(4)", 2).unwrap();
    let t = betti_table(&m.curve, &m.bundle).unwrap();
    assert_eq!(t.r, 3);
    assert_eq!(row(&t, 0), vec![1, 0, 0, 0]);
    assert_eq!(row(&t, 1), vec![0, 1, 0, 0]);
    assert_eq!(row(&t, 2), vec![0, 1, 0, 0]);
    assert_eq!(row(&t, 3), vec![0, 0, 1, 0]);
}

#[test]
fn canonical_genus_three_table() {
    // plane quartic: no generators in the displayed strands, h¹ at (r−1, 3)
    let m = builtin_model("canonical-graph(3)", 1).unwrap();
    let t = betti_table(&m.curve, &m.bundle).unwrap();
    assert_eq!(t.r, 2);
    assert_eq!(row(&t, 0), vec![1, 0, 0]);
    assert_eq!(row(&t, 1), vec![0, 0, 0]);
    assert_eq!(row(&t, 2), vec![0, 0, 0]);
    assert_eq!(row(&t, 3), vec![0, 1, 0]);
}

#[test]
fn duality_between_q2_cells_and_twisted_strand() {
    for (name, seed) in [("cycle-genus-1(4)", 3u64), ("cycle-genus-1(5)", 3), ("canonical-graph(4)", 2)] {
        let m = builtin_model(name, seed).unwrap();
        let t = betti_table(&m.curve, &m.bundle).unwrap();
        for p in 1..=t.r {
            assert_eq!(
                t.k(p - 1, 2).unwrap(),
                twisted_k00(&m.curve, &m.bundle, p).unwrap(),
                "{name}: duality mismatch at p={p}"
            );
        }
    }
}
