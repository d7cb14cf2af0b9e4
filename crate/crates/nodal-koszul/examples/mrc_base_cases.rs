//! Maximal-rank status of Sym² H⁰(L) → H⁰(L²) on the base-case families:
//! rational normal curves (h¹ = 0) and canonical graph curves (h¹ = 1).
//!
//!     cargo run --example mrc_base_cases

use nodal_koszul::linalg::binomial;
use nodal_koszul::runner::builtin_model;
use nodal_koszul::verify::mrc_status;

fn main() {
    println!("rational normal curves, d = r:");
    for d in 2..=7i64 {
        let model = builtin_model(&format!("rational-normal({d})"), 0).unwrap();
        let s = mrc_status(&model.curve, &model.bundle).unwrap();
        println!(
            "  d={d}: k11 = {:>2} (= C({d},2) = {}), k02 = {}, verdict {:?}",
            s.k11,
            binomial(d, 2),
            s.k02,
            s.verdict
        );
    }

    println!("\ncanonical graph curves (dualizing sheaf on trivalent graphs):");
    for g in 3..=5i64 {
        let model = builtin_model(&format!("canonical-graph({g})"), 1).unwrap();
        let s = mrc_status(&model.curve, &model.bundle).unwrap();
        println!(
            "  g={g}: Sym² is {} -> {}, k11 = {}, k02 = {}, verdict {:?}",
            g * (g + 1) / 2,
            3 * g - 3,
            s.k11,
            s.k02,
            s.verdict
        );
    }
}
