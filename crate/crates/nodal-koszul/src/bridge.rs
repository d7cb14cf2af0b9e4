//! Genus-raising degeneration: glue a new rational bridge component onto a
//! curve at two smooth points.
//!
//! The bridge carries degree 1, so every section of the old bundle extends
//! uniquely across it (a degree-1 form on P¹ is free to take any two values
//! at 0 and ∞). Arithmetic genus and total degree both go up by one while
//! h⁰ is preserved; the constructor checks the h⁰ equality and treats a
//! failure as a model bug.

use num_traits::Zero;

use crate::bundle::LineBundle;
use crate::curve::{derive_seed, Branch, CPoint, NodalCurve, Node, PointOnCurve, Sampler};
use crate::error::{Error, Result};
use crate::sections::{h0_basis, vanishing_subspace, SectionSpace};

/// X = Y ∪ Z with Z ≅ P¹ meeting Y at u and v; the bundle gets degree 1 on
/// Z with seeded gluings at the two new nodes (u ↔ 0 on Z, v ↔ ∞ on Z).
pub fn attach_bridge(
    curve: &NodalCurve,
    bundle: &LineBundle,
    u: &PointOnCurve,
    v: &PointOnCurve,
) -> Result<(NodalCurve, LineBundle)> {
    curve.check_smooth_point(u)?;
    curve.check_smooth_point(v)?;
    if u == v {
        return Err(Error::Degenerate("bridge points must be distinct".into()));
    }

    let z = curve.components();
    let mut nodes = curve.nodes().to_vec();
    nodes.push(Node {
        a: Branch { component: u.component, point: u.point.clone() },
        b: Branch { component: z, point: CPoint::finite(crate::rat::rat_int(0)) },
    });
    nodes.push(Node {
        a: Branch { component: v.component, point: v.point.clone() },
        b: Branch { component: z, point: CPoint::infinity() },
    });

    let child_seed = derive_seed(curve.seed(), nodes.len() as u64);
    let mut sampler = Sampler::new(child_seed);
    let mut gluings = bundle.gluings().to_vec();
    gluings.push(sampler.nonzero_rational());
    gluings.push(sampler.nonzero_rational());

    let mut degrees = bundle.degrees().to_vec();
    degrees.push(1);

    let new_curve = NodalCurve::new(z + 1, nodes, child_seed)?;
    let new_bundle = LineBundle::new(&new_curve, degrees, gluings)?;

    let h0_y = h0_basis(curve, bundle).dim();
    let h0_x = h0_basis(&new_curve, &new_bundle).dim();
    if h0_x != h0_y {
        return Err(Error::Invariant(format!(
            "section extension across the bridge failed: h⁰ went from {h0_y} to {h0_x}"
        )));
    }
    debug_assert_eq!(new_curve.genus(), curve.genus() + 1);
    Ok((new_curve, new_bundle))
}

/// A seeded pair of smooth points in general position for the given section
/// space: distinct projective images, and vanishing at both drops h⁰ by
/// exactly two. Resamples with incremented seeds, at most 32 attempts.
pub fn general_point_pair(
    curve: &NodalCurve,
    space: &SectionSpace,
    seed: u64,
) -> Result<(PointOnCurve, PointOnCurve)> {
    for attempt in 0..32u64 {
        let mut sampler = Sampler::new(derive_seed(seed, attempt));
        let u = sampler.smooth_point(curve);
        let v = sampler.smooth_point(curve);
        if pair_is_general(curve, space, &u, &v) {
            return Ok((u, v));
        }
    }
    Err(Error::Degenerate(format!(
        "no general point pair found in 32 attempts (seed {seed})"
    )))
}

/// The audit used by every consumer of "two general points".
pub fn pair_is_general(
    curve: &NodalCurve,
    space: &SectionSpace,
    u: &PointOnCurve,
    v: &PointOnCurve,
) -> bool {
    if u == v {
        return false;
    }
    let iu = space.point_image(u);
    let iv = space.point_image(v);
    if iu.iter().all(num_traits::Zero::is_zero) || iv.iter().all(num_traits::Zero::is_zero) {
        return false;
    }
    if images_proportional(&iu, &iv) {
        return false;
    }
    match vanishing_subspace(curve, space, &[u.clone(), v.clone()]) {
        Ok(sub) => sub.dim() + 2 == space.dim(),
        Err(_) => false,
    }
}

fn images_proportional(a: &[crate::rat::Rat], b: &[crate::rat::Rat]) -> bool {
    // rank of the 2 x n stack is < 2 iff all 2x2 minors vanish
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if !(&a[i] * &b[j] - &a[j] * &b[i]).is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{dualizing_bundle, twist_by_points, LineBundle};
    use crate::rat::{rat, rat_int};

    fn line_with_bundle(d: i64) -> (NodalCurve, LineBundle) {
        let c = NodalCurve::new(1, vec![], 17).unwrap();
        let l = LineBundle::new(&c, vec![d], vec![]).unwrap();
        (c, l)
    }

    fn uv_on_line() -> (PointOnCurve, PointOnCurve) {
        (
            PointOnCurve { component: 0, point: CPoint::finite(rat_int(1)) },
            PointOnCurve { component: 0, point: CPoint::finite(rat(-3, 2)) },
        )
    }

    #[test]
    fn bridge_preserves_h0_and_raises_genus() {
        let (c, a) = line_with_bundle(4);
        let (u, v) = uv_on_line();
        let (x, l) = attach_bridge(&c, &a, &u, &v).unwrap();
        assert_eq!(x.genus(), 1);
        assert_eq!(l.total_degree(), 5);
        assert_eq!(h0_basis(&x, &l).dim(), 5);

        // iterate once more
        let mut s = Sampler::new(99);
        let u2 = s.smooth_point_on(&x, 0);
        let v2 = s.smooth_point_on(&x, 1);
        let (x2, l2) = attach_bridge(&x, &l, &u2, &v2).unwrap();
        assert_eq!(x2.genus(), 2);
        assert_eq!(l2.total_degree(), 6);
        assert_eq!(h0_basis(&x2, &l2).dim(), 5);
    }

    #[test]
    fn bridge_rejects_node_branches_and_equal_points() {
        let (c, a) = line_with_bundle(4);
        let (u, v) = uv_on_line();
        let (x, l) = attach_bridge(&c, &a, &u, &v).unwrap();
        // u is now a node branch of x
        assert!(attach_bridge(&x, &l, &u, &v).is_err());
        let p = PointOnCurve { component: 0, point: CPoint::finite(rat_int(7)) };
        assert!(attach_bridge(&x, &l, &p, &p).is_err());
    }

    #[test]
    fn dualizing_restriction_identities_across_bridge() {
        let (c, a) = line_with_bundle(4);
        let (u, v) = uv_on_line();
        let (x, l) = attach_bridge(&c, &a, &u, &v).unwrap();
        let wx = dualizing_bundle(&x);
        let ky = dualizing_bundle(&c);
        let uv = [u.clone(), v.clone()];

        // bridge restriction has degree 0; old component picks up the two
        // branch points
        assert_eq!(wx.degrees()[1], 0);
        assert_eq!(wx.degrees()[0], ky.degrees()[0] + 2);

        // h⁰(X, ω) = h⁰(Y, K(u+v))
        let ky_uv = twist_by_points(&c, &ky, &uv, true).unwrap();
        assert_eq!(h0_basis(&x, &wx).dim(), h0_basis(&c, &ky_uv).dim());

        // h⁰(X, ω ⊗ L⁻¹) = h⁰(Y, K ⊗ A⁻¹)
        assert_eq!(
            h0_basis(&x, &wx.tensor(&l.inverse())).dim(),
            h0_basis(&c, &ky.tensor(&a.inverse())).dim()
        );

        // h⁰(X, ω ⊗ L) = h⁰(Y, K ⊗ A(u+v))
        let rhs = twist_by_points(&c, &ky.tensor(&a), &uv, true).unwrap();
        assert_eq!(h0_basis(&x, &wx.tensor(&l)).dim(), h0_basis(&c, &rhs).dim());
    }

    #[test]
    fn general_pair_audit_accepts_generic_and_rejects_equal() {
        let (c, a) = line_with_bundle(4);
        let sp = h0_basis(&c, &a);
        let (u, v) = general_point_pair(&c, &sp, 3).unwrap();
        assert!(pair_is_general(&c, &sp, &u, &v));
        assert!(!pair_is_general(&c, &sp, &u, &u));
    }
}
