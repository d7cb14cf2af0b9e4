//! Line bundles on nodal curves, given by per-component degrees and one
//! nonzero gluing scalar per node.
//!
//! A global section is a tuple of binary forms, one per component, with
//! value-matching at every node: value on branch `a` equals the gluing times
//! the value on branch `b` (values at canonical representatives). Tensor
//! products add degrees and multiply gluings; divisor twists and the
//! dualizing sheaf are computed here so that all downstream section spaces
//! are plain kernel computations.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::curve::{NodalCurve, PointOnCurve};
use crate::error::{Error, Result};
use crate::forms::BinForm;
use crate::rat::{rat_from_string, rat_to_string, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBundle {
    degrees: Vec<i64>,
    gluings: Vec<Rat>,
}

impl LineBundle {
    pub fn new(curve: &NodalCurve, degrees: Vec<i64>, gluings: Vec<Rat>) -> Result<LineBundle> {
        if degrees.len() != curve.components() {
            return Err(Error::InvalidBundle(format!(
                "{} degrees for {} components",
                degrees.len(),
                curve.components()
            )));
        }
        if gluings.len() != curve.nodes().len() {
            return Err(Error::InvalidBundle(format!(
                "{} gluings for {} nodes",
                gluings.len(),
                curve.nodes().len()
            )));
        }
        if gluings.iter().any(Rat::is_zero) {
            return Err(Error::InvalidBundle("gluing scalar is zero".into()));
        }
        Ok(LineBundle { degrees, gluings })
    }

    pub fn trivial(curve: &NodalCurve) -> LineBundle {
        LineBundle {
            degrees: vec![0; curve.components()],
            gluings: vec![Rat::one(); curve.nodes().len()],
        }
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn gluings(&self) -> &[Rat] {
        &self.gluings
    }

    pub fn total_degree(&self) -> i64 {
        self.degrees.iter().sum()
    }

    pub fn tensor(&self, other: &LineBundle) -> LineBundle {
        assert_eq!(self.degrees.len(), other.degrees.len(), "tensor across different curves");
        LineBundle {
            degrees: self.degrees.iter().zip(&other.degrees).map(|(a, b)| a + b).collect(),
            gluings: self.gluings.iter().zip(&other.gluings).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn inverse(&self) -> LineBundle {
        LineBundle {
            degrees: self.degrees.iter().map(|d| -d).collect(),
            gluings: self.gluings.iter().map(|g| Rat::one() / g).collect(),
        }
    }

    /// k-th tensor power (k may be negative).
    pub fn power(&self, k: i64) -> LineBundle {
        LineBundle {
            degrees: self.degrees.iter().map(|d| d * k).collect(),
            gluings: self
                .gluings
                .iter()
                .map(|g| {
                    if k >= 0 {
                        num_traits::pow::pow(g.clone(), k as usize)
                    } else {
                        Rat::one() / num_traits::pow::pow(g.clone(), (-k) as usize)
                    }
                })
                .collect(),
        }
    }

    /// Isomorphic bundle obtained by rescaling the trivialization on one
    /// component. Section spaces must not change dimension.
    pub fn rescale_component(&self, curve: &NodalCurve, component: usize, c: &Rat) -> LineBundle {
        assert!(!c.is_zero());
        let mut gluings = self.gluings.clone();
        for (n, node) in curve.nodes().iter().enumerate() {
            if node.a.component == component {
                gluings[n] = &gluings[n] * c;
            }
            if node.b.component == component {
                gluings[n] = &gluings[n] / c;
            }
        }
        LineBundle { degrees: self.degrees.clone(), gluings }
    }
}

/// The bundle O(D) for an effective divisor D of smooth points.
///
/// Sections of O(D) are rational functions with poles bounded by D; in form
/// coordinates the gluing at a node is the ratio of the products of the
/// divisor's linear forms evaluated at the two branches.
pub fn divisor_bundle(curve: &NodalCurve, pts: &[PointOnCurve]) -> Result<LineBundle> {
    for p in pts {
        curve.check_smooth_point(p)?;
    }
    let mut degrees = vec![0i64; curve.components()];
    for p in pts {
        degrees[p.component] += 1;
    }
    let eval_product = |component: usize, at: &crate::curve::CPoint| -> Rat {
        let mut acc = Rat::one();
        for p in pts.iter().filter(|p| p.component == component) {
            let l = BinForm::vanishing_at(p.point.a(), p.point.b());
            acc *= l.eval(at.a(), at.b());
        }
        acc
    };
    let mut gluings = Vec::with_capacity(curve.nodes().len());
    for node in curve.nodes() {
        let ea = eval_product(node.a.component, &node.a.point);
        let eb = eval_product(node.b.component, &node.b.point);
        // smooth points never sit at node branches, so both are nonzero
        gluings.push(ea / eb);
    }
    LineBundle::new(curve, degrees, gluings)
}

/// Twist by an effective divisor: L(D) when `up`, L(−D) otherwise.
pub fn twist_by_points(
    curve: &NodalCurve,
    bundle: &LineBundle,
    pts: &[PointOnCurve],
    up: bool,
) -> Result<LineBundle> {
    let d = divisor_bundle(curve, pts)?;
    Ok(if up { bundle.tensor(&d) } else { bundle.tensor(&d.inverse()) })
}

/// Product over the other node branches on the same component of their
/// linear forms evaluated at the given branch point. The reciprocal is the
/// residue of a numerator form normalized to 1 at that branch.
fn branch_cofactor(curve: &NodalCurve, component: usize, at: &crate::curve::CPoint) -> Rat {
    let mut acc = Rat::one();
    for q in curve.branch_points_on(component) {
        if q == at {
            continue;
        }
        let l = BinForm::vanishing_at(q.a(), q.b());
        acc *= l.eval(at.a(), at.b());
    }
    acc
}

/// The dualizing sheaf as concrete bundle data.
///
/// Restricted to a component with k node branches it has degree k − 2;
/// sections correspond to differentials with at worst simple poles at the
/// branches and opposite residues across each node. Writing a local
/// differential as g/D·dz with D the product of the branch linear forms, the
/// residue at branch P is g(P) divided by the cofactor product, which fixes
/// each gluing as minus the ratio of the two cofactor products.
pub fn dualizing_bundle(curve: &NodalCurve) -> LineBundle {
    let degrees: Vec<i64> =
        (0..curve.components()).map(|c| curve.branch_count(c) as i64 - 2).collect();
    let gluings: Vec<Rat> = curve
        .nodes()
        .iter()
        .map(|node| {
            let pa = branch_cofactor(curve, node.a.component, &node.a.point);
            let pb = branch_cofactor(curve, node.b.component, &node.b.point);
            -pa / pb
        })
        .collect();
    LineBundle { degrees, gluings }
}

/// A curve with a distinguished bundle; the unit of serialization, hashing
/// and caching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub curve: NodalCurve,
    pub bundle: LineBundle,
}

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    a: (usize, (String, String)),
    b: (usize, (String, String)),
    gluing: String,
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    components: usize,
    nodes: Vec<NodeDoc>,
    degrees: Vec<i64>,
    seed: u64,
}

impl Model {
    pub fn new(curve: NodalCurve, bundle: LineBundle) -> Result<Model> {
        if bundle.degrees().len() != curve.components()
            || bundle.gluings().len() != curve.nodes().len()
        {
            return Err(Error::InvalidBundle("bundle does not match curve".into()));
        }
        Ok(Model { curve, bundle })
    }

    pub fn genus(&self) -> i64 {
        self.curve.genus()
    }

    pub fn degree(&self) -> i64 {
        self.bundle.total_degree()
    }

    /// Canonical JSON document; round-trips bit-exactly.
    pub fn to_json(&self) -> String {
        let doc = ModelDoc {
            components: self.curve.components(),
            nodes: self
                .curve
                .nodes()
                .iter()
                .zip(self.bundle.gluings())
                .map(|(n, g)| NodeDoc {
                    a: (
                        n.a.component,
                        (rat_to_string(n.a.point.a()), rat_to_string(n.a.point.b())),
                    ),
                    b: (
                        n.b.component,
                        (rat_to_string(n.b.point.a()), rat_to_string(n.b.point.b())),
                    ),
                    gluing: rat_to_string(g),
                })
                .collect(),
            degrees: self.bundle.degrees().to_vec(),
            seed: self.curve.seed(),
        };
        serde_json::to_string(&doc).expect("model serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Model> {
        let doc: ModelDoc =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("model json: {e}")))?;
        let mut nodes = Vec::with_capacity(doc.nodes.len());
        let mut gluings = Vec::with_capacity(doc.nodes.len());
        for nd in &doc.nodes {
            let point = |(ref a, ref b): &(String, String)| -> Result<crate::curve::CPoint> {
                crate::curve::CPoint::new(rat_from_string(a)?, rat_from_string(b)?)
            };
            nodes.push(crate::curve::Node {
                a: crate::curve::Branch { component: nd.a.0, point: point(&nd.a.1)? },
                b: crate::curve::Branch { component: nd.b.0, point: point(&nd.b.1)? },
            });
            gluings.push(rat_from_string(&nd.gluing)?);
        }
        let curve = NodalCurve::new(doc.components, nodes, doc.seed)?;
        let bundle = LineBundle::new(&curve, doc.degrees, gluings)?;
        Model::new(curve, bundle)
    }

    /// Hash of the canonical JSON; identifies the model in certificates and
    /// cache keys.
    pub fn hash(&self) -> String {
        content_hash(self.to_json().as_bytes())
    }
}

/// First 16 hex chars of sha256; enough to identify artifacts.
pub fn content_hash(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(16);
    for b in digest.iter().take(8) {
        s.push_str(&format!("{b:02x}"));
    }
    s
}
