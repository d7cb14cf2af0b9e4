//! Build a model by hand, serialize it, and feed it through the engine:
//! the same JSON document drives the CLI's `model` config field.
//!
//!     cargo run --example custom_model

use nodal_koszul::bundle::{LineBundle, Model};
use nodal_koszul::curve::{Branch, CPoint, NodalCurve, Node};
use nodal_koszul::koszul::betti_table;
use nodal_koszul::rat::{rat, rat_int};
use nodal_koszul::verify::{gv_status, mrc_status};

fn main() {
    // a 3-cycle of lines with a bundle of multidegree (2, 1, 1): an
    // elliptic normal quartic degeneration
    let node = |ca: usize, za: (i64, i64), cb: usize, zb: (i64, i64)| Node {
        a: Branch { component: ca, point: CPoint::finite(rat(za.0, za.1)) },
        b: Branch { component: cb, point: CPoint::finite(rat(zb.0, zb.1)) },
    };
    let curve = NodalCurve::new(
        3,
        vec![
            node(0, (0, 1), 1, (0, 1)),
            node(1, (1, 1), 2, (0, 1)),
            node(2, (1, 1), 0, (3, 2)),
        ],
        0,
    )
    .unwrap();
    let bundle =
        LineBundle::new(&curve, vec![2, 1, 1], vec![rat_int(1), rat(2, 3), rat_int(-2)]).unwrap();
    let model = Model::new(curve, bundle).unwrap();

    println!("model json: {}", model.to_json());
    println!("model hash: {}", model.hash());
    assert_eq!(Model::from_json(&model.to_json()).unwrap(), model);

    let table = betti_table(&model.curve, &model.bundle).unwrap();
    println!("g = {}, r = {}, d = {}", table.g, table.r, table.d);
    println!("k_(1,1) = {}, k_(0,2) = {}", table.k(1, 1).unwrap(), table.k(0, 2).unwrap());

    let status = mrc_status(&model.curve, &model.bundle).unwrap();
    println!("multiplication map: {:?}", status.verdict);

    let cert = gv_status(&model.curve, &model.bundle, 1).unwrap();
    println!(
        "GV(1) on this witness: holds = {} (hash {}, caveat {:?})",
        cert.holds, cert.witness_curve_hash, cert.caveat
    );
}
