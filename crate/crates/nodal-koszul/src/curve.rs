//! Nodal curves glued from rational components.
//!
//! A curve is a list of components (each a copy of P¹ with coordinates
//! (s : t)) and a list of nodes, each identifying a marked point on one
//! component with a marked point on another. The dual graph must be
//! connected; the arithmetic genus is #nodes − #components + 1.
//!
//! Points are stored canonically as (z, 1) or (1, 0). Section values at a
//! point always mean evaluation of the binary form at this representative,
//! which pins every gluing constant in the crate to one convention.

use num_traits::{One, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rat::{rat_to_string, Rat};

/// Point of P¹ held by its canonical representative: (z, 1) if finite,
/// (1, 0) at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CPoint {
    a: Rat,
    b: Rat,
}

impl CPoint {
    pub fn new(a: Rat, b: Rat) -> Result<CPoint> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidCurve("point (0 : 0) is not projective".into()));
        }
        if b.is_zero() {
            Ok(CPoint { a: Rat::one(), b: Rat::zero() })
        } else {
            Ok(CPoint { a: a / &b, b: Rat::one() })
        }
    }

    pub fn finite(z: Rat) -> CPoint {
        CPoint { a: z, b: Rat::one() }
    }

    pub fn infinity() -> CPoint {
        CPoint { a: Rat::one(), b: Rat::zero() }
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn is_infinity(&self) -> bool {
        self.b.is_zero()
    }

    pub fn label(&self) -> String {
        format!("({} : {})", rat_to_string(&self.a), rat_to_string(&self.b))
    }
}

/// One side of a node: a marked point on a component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub component: usize,
    pub point: CPoint,
}

/// A node identifying two branches on distinct components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub a: Branch,
    pub b: Branch,
}

/// A smooth point of the curve (never a node branch).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointOnCurve {
    pub component: usize,
    pub point: CPoint,
}

/// A connected nodal curve with rational components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodalCurve {
    components: usize,
    nodes: Vec<Node>,
    seed: u64,
}

impl NodalCurve {
    pub fn new(components: usize, nodes: Vec<Node>, seed: u64) -> Result<NodalCurve> {
        let curve = NodalCurve { components, nodes, seed };
        curve.validate()?;
        Ok(curve)
    }

    fn validate(&self) -> Result<()> {
        if self.components == 0 {
            return Err(Error::InvalidCurve("curve needs at least one component".into()));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if n.a.component >= self.components || n.b.component >= self.components {
                return Err(Error::InvalidCurve(format!("node {i} references a missing component")));
            }
            if n.a.component == n.b.component {
                return Err(Error::InvalidCurve(format!(
                    "node {i} joins component {} to itself; self-nodes are not supported",
                    n.a.component
                )));
            }
        }
        // No two branches may share a marked point on a component.
        for c in 0..self.components {
            let pts = self.branch_points_on(c);
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    if pts[i] == pts[j] {
                        return Err(Error::InvalidCurve(format!(
                            "component {c} carries two node branches at {}",
                            pts[i].label()
                        )));
                    }
                }
            }
        }
        if !self.is_connected() {
            return Err(Error::InvalidCurve("dual graph is disconnected".into()));
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.components];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for n in &self.nodes {
                for (x, y) in [(n.a.component, n.b.component), (n.b.component, n.a.component)] {
                    if x == c && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Arithmetic genus: #nodes − #components + 1.
    pub fn genus(&self) -> i64 {
        self.nodes.len() as i64 - self.components as i64 + 1
    }

    /// Marked points of all node branches lying on `component`.
    pub fn branch_points_on(&self, component: usize) -> Vec<&CPoint> {
        let mut pts = Vec::new();
        for n in &self.nodes {
            if n.a.component == component {
                pts.push(&n.a.point);
            }
            if n.b.component == component {
                pts.push(&n.b.point);
            }
        }
        pts
    }

    pub fn branch_count(&self, component: usize) -> usize {
        self.branch_points_on(component).len()
    }

    pub fn is_node_branch(&self, p: &PointOnCurve) -> bool {
        self.branch_points_on(p.component).iter().any(|q| **q == p.point)
    }

    /// Checks that `p` lies on the curve away from every node.
    pub fn check_smooth_point(&self, p: &PointOnCurve) -> Result<()> {
        if p.component >= self.components {
            return Err(Error::InvalidCurve(format!("point on missing component {}", p.component)));
        }
        if self.is_node_branch(p) {
            return Err(Error::Degenerate(format!(
                "point {} on component {} is a node branch",
                p.point.label(),
                p.component
            )));
        }
        Ok(())
    }
}

/// Deterministic splitmix64 step, used to derive child seeds.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e3779b97f4a7c15);
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Seeded sampler producing small-height rational data. All "general"
/// choices in the crate flow through one of these, so a run is a pure
/// function of its seeds.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Small-height rational, numerator in [-24, 24], denominator in [1, 4].
    pub fn rational(&mut self) -> Rat {
        let num = self.rng.random_range(-24i64..=24);
        let den = self.rng.random_range(1i64..=4);
        crate::rat::rat(num, den)
    }

    pub fn nonzero_rational(&mut self) -> Rat {
        loop {
            let r = self.rational();
            if !r.is_zero() {
                return r;
            }
        }
    }

    /// Finite point distinct from every point in `avoid`.
    pub fn point_avoiding(&mut self, avoid: &[&CPoint]) -> CPoint {
        loop {
            let p = CPoint::finite(self.rational());
            if avoid.iter().all(|q| **q != p) {
                return p;
            }
        }
    }

    /// Smooth point on a uniformly chosen component.
    pub fn smooth_point(&mut self, curve: &NodalCurve) -> PointOnCurve {
        let component = self.rng.random_range(0..curve.components());
        let avoid = curve.branch_points_on(component);
        let point = self.point_avoiding(&avoid);
        PointOnCurve { component, point }
    }

    /// Smooth point on a fixed component.
    pub fn smooth_point_on(&mut self, curve: &NodalCurve, component: usize) -> PointOnCurve {
        let avoid = curve.branch_points_on(component);
        let point = self.point_avoiding(&avoid);
        PointOnCurve { component, point }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    fn two_cycle() -> NodalCurve {
        let n = |za: i64, zb: i64| Node {
            a: Branch { component: 0, point: CPoint::finite(rat_int(za)) },
            b: Branch { component: 1, point: CPoint::finite(rat_int(zb)) },
        };
        NodalCurve::new(2, vec![n(0, 0), n(1, 1)], 7).unwrap()
    }

    #[test]
    fn genus_counts_cycles() {
        assert_eq!(two_cycle().genus(), 1);
        let single = NodalCurve::new(1, vec![], 0).unwrap();
        assert_eq!(single.genus(), 0);
    }

    #[test]
    fn rejects_self_node_and_shared_branch() {
        let self_node = Node {
            a: Branch { component: 0, point: CPoint::finite(rat_int(0)) },
            b: Branch { component: 0, point: CPoint::finite(rat_int(1)) },
        };
        assert!(NodalCurve::new(1, vec![self_node], 0).is_err());

        let shared = vec![
            Node {
                a: Branch { component: 0, point: CPoint::finite(rat_int(0)) },
                b: Branch { component: 1, point: CPoint::finite(rat_int(0)) },
            },
            Node {
                a: Branch { component: 0, point: CPoint::finite(rat_int(0)) },
                b: Branch { component: 1, point: CPoint::finite(rat_int(1)) },
            },
        ];
        assert!(NodalCurve::new(2, shared, 0).is_err());
    }

    #[test]
    fn rejects_disconnected_graph() {
        assert!(NodalCurve::new(2, vec![], 0).is_err());
    }

    #[test]
    fn smooth_point_check() {
        let c = two_cycle();
        let node_pt = PointOnCurve { component: 0, point: CPoint::finite(rat_int(0)) };
        assert!(c.check_smooth_point(&node_pt).is_err());
        let ok = PointOnCurve { component: 0, point: CPoint::finite(rat_int(5)) };
        assert!(c.check_smooth_point(&ok).is_ok());
    }

    #[test]
    fn sampler_is_deterministic() {
        let mut s1 = Sampler::new(42);
        let mut s2 = Sampler::new(42);
        for _ in 0..16 {
            assert_eq!(s1.rational(), s2.rational());
        }
    }

    #[test]
    fn cpoint_normalizes() {
        let p = CPoint::new(rat_int(4), rat_int(2)).unwrap();
        assert_eq!(p, CPoint::finite(rat_int(2)));
        let q = CPoint::new(rat_int(3), rat_int(0)).unwrap();
        assert!(q.is_infinity());
        assert!(CPoint::new(rat_int(0), rat_int(0)).is_err());
    }
}
