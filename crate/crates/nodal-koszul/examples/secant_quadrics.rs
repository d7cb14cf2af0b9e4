//! Quadrics through a model and the polar-form secant test: a quadric Q
//! with Q(u) = Q(v) = 0 contains the line through u and v iff the
//! polarization Q(u+v) − Q(u) − Q(v) vanishes.
//!
//!     cargo run --example secant_quadrics

use num_traits::Zero;

use nodal_koszul::curve::{CPoint, PointOnCurve};
use nodal_koszul::rat::{rat_int, rat_to_string};
use nodal_koszul::runner::builtin_model;
use nodal_koszul::verify::{
    quadrics_through, secant_noncontainment_check, secant_quadric_witness, SecantScan,
};

fn main() {
    let model = builtin_model("twisted-cubic", 0).unwrap();
    let (quadrics, space) = quadrics_through(&model.curve, &model.bundle).unwrap();
    println!("twisted cubic: {} independent quadrics through the model", quadrics.len());

    // the classical pair: parameters 0 and infinity
    let u = PointOnCurve { component: 0, point: CPoint::infinity() };
    let v = PointOnCurve { component: 0, point: CPoint::finite(rat_int(0)) };
    println!("images: u -> {:?}", space.point_image(&u).iter().map(rat_to_string).collect::<Vec<_>>());
    println!("        v -> {:?}", space.point_image(&v).iter().map(rat_to_string).collect::<Vec<_>>());

    let iu = space.point_image(&u);
    let iv = space.point_image(&v);
    for (i, q) in quadrics.iter().enumerate() {
        let polar = q.polar(&iu, &iv);
        let verdict = if polar.is_zero() { "contains the secant line" } else { "separates it" };
        println!("  quadric {i}: B_Q(u,v) = {} -> {verdict}", rat_to_string(&polar));
    }

    let witness = secant_quadric_witness(&model.curve, &model.bundle, &u, &v)
        .unwrap()
        .expect("the twisted cubic has a separating quadric");
    println!(
        "witness: quadric {} with polar value {}",
        witness.quadric_index,
        rat_to_string(&witness.polar_value)
    );

    // no quadric contains the whole secant variety: every basis quadric and
    // a seeded sample of combinations receive a separating point pair
    for r in 3..=6i64 {
        let model = builtin_model(&format!("rational-normal({r})"), 2).unwrap();
        match secant_noncontainment_check(&model.curve, &model.bundle, 77).unwrap() {
            SecantScan::AllWitnessed { quadrics, pairs_tested } => {
                println!("r={r}: all {quadrics} quadrics witnessed ({pairs_tested} pairs sampled)")
            }
            SecantScan::Inconclusive { quadric_index, budget } => {
                println!("r={r}: inconclusive on quadric {quadric_index} after {budget} pairs")
            }
        }
    }
}
