//! The genus-raising induction: starting from the rational normal quartic,
//! attach one bridge per step and certify generic vanishing in each new
//! (g, d) cell. Each step verifies one of the two admissible conditions
//! before attaching (here the secant-quadric witness route fires).
//!
//!     cargo run --example gv_induction

use nodal_koszul::runner::builtin_model;
use nodal_koszul::verify::induction_driver;

fn main() {
    let base = builtin_model("rational-normal(4)", 9).unwrap();
    let run = induction_driver(&base.curve, &base.bundle, 5, 1, 42).unwrap();

    for cert in &run.certificates {
        println!(
            "(g={}, r={}, d={}) p={}: holds={} via {:?}",
            cert.g, cert.r, cert.d, cert.p, cert.holds, cert.route
        );
        println!(
            "    k_(1,1) = {}, k_(0,2) = {}, witness {}, caveat {:?}",
            cert.k_p1, cert.k_pm1_2, cert.witness_curve_hash, cert.caveat
        );
        println!("    certificate line: {}", serde_json::to_string(cert).unwrap());
    }
    match &run.diagnostic {
        None => println!("chain complete"),
        Some(d) => println!("stopped: {d}"),
    }
}
