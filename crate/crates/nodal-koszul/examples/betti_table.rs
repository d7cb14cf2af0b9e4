//! Compute and print full Betti tables, and cross-check the strand Euler
//! characteristic against its closed form.
//!
//!     cargo run --example betti_table

use nodal_koszul::koszul::{betti_table, chi_expected};
use nodal_koszul::runner::builtin_model;

fn main() {
    for name in ["rational-normal(4)", "cycle-genus-1(5)", "canonical-graph(4)"] {
        let model = builtin_model(name, 11).expect("builtin model");
        let table = betti_table(&model.curve, &model.bundle).expect("base point free");
        println!("{name}: g = {}, r = {}, d = {}", table.g, table.r, table.d);
        println!("  curve hash {}, seed {}", table.curve_hash, table.seed);

        // rows top to bottom q = 3..0, columns p = r..0
        for q in (0..=3i64).rev() {
            let row: Vec<String> = (0..=table.r)
                .rev()
                .map(|p| format!("{:>4}", table.k(p, q).unwrap()))
                .collect();
            println!("  q={q} |{}", row.join(""));
        }

        for p in 1..table.r as i64 {
            let lhs = table.k(p as usize, 1).unwrap() as i64
                - table.k(p as usize - 1, 2).unwrap() as i64;
            let chi = chi_expected(table.g, table.r as i64, table.d, p);
            assert_eq!(lhs, chi);
            println!("  strand p={p}: k_(p,1) − k_(p−1,2) = {lhs} = χ");
        }
        println!();
    }
}
