//! Independent oracle for section spaces of dualizing-sheaf twists.
//!
//! Sections of ω ⊗ M are modelled directly as tuples of meromorphic
//! differentials: on each component a numerator form over the product of the
//! branch linear forms, with at worst simple poles at the branches, and with
//! residues cancelling across each node (weighted by M's gluing).
//!
//! Residues here are computed by expanding the pole denominator and doing an
//! exact polynomial division in the local chart, and the constraint system
//! is solved by a self-contained dense elimination. The main code path
//! (`dualizing_bundle` + `h0_basis`) shares none of this arithmetic, which
//! is what makes the agreement test meaningful.

use num_traits::{One, Zero};

use crate::bundle::LineBundle;
use crate::curve::{CPoint, NodalCurve};
use crate::rat::Rat;

/// h⁰(ω ⊗ M) computed in the residue model. `m_twist` is the twisting
/// bundle M (pass the trivial bundle for ω itself); degrees add on top of
/// the per-component pole degrees.
pub fn h0_residue_oracle(curve: &NodalCurve, m_twist: &LineBundle) -> usize {
    // numerator degree per component: (branches - 2) + m_i
    let degs: Vec<i64> = (0..curve.components())
        .map(|c| curve.branch_count(c) as i64 - 2 + m_twist.degrees()[c])
        .collect();
    let mut offsets = Vec::with_capacity(degs.len());
    let mut cols = 0usize;
    for &d in &degs {
        if d >= 0 {
            offsets.push(Some(cols));
            cols += d as usize + 1;
        } else {
            offsets.push(None);
        }
    }

    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(curve.nodes().len());
    for (node, nu) in curve.nodes().iter().zip(m_twist.gluings()) {
        let mut row = vec![Rat::zero(); cols];
        add_residue_pattern(curve, node.a.component, &node.a.point, degs[node.a.component], offsets[node.a.component], &Rat::one(), &mut row);
        add_residue_pattern(curve, node.b.component, &node.b.point, degs[node.b.component], offsets[node.b.component], nu, &mut row);
        rows.push(row);
    }

    cols - dense_rank(rows, cols)
}

/// Residue of g / D at the branch, as a linear functional on the numerator
/// coefficients, scaled and accumulated into `row`.
fn add_residue_pattern(
    curve: &NodalCurve,
    component: usize,
    at: &CPoint,
    deg: i64,
    offset: Option<usize>,
    scale: &Rat,
    row: &mut [Rat],
) {
    let Some(offset) = offset else {
        return;
    };
    let branches = curve.branch_points_on(component);
    let d = deg as usize;

    if !at.is_infinity() {
        // chart z = s/t: D(z) = prod (b_R z - a_R); divide out (z - z_at)
        let mut dpoly = vec![Rat::one()];
        for q in &branches {
            dpoly = poly_mul_linear(&dpoly, &-q.a().clone(), q.b());
        }
        let z = at.a().clone();
        let quot = synthetic_div(&dpoly, &z);
        let denom = eval_poly(&quot, &z);
        debug_assert!(!denom.is_zero(), "simple pole expected at branch");
        // residue = g(z, 1) / denom; g(z,1) = sum c_j z^j
        let mut zpow = Rat::one();
        for j in 0..=d {
            row[offset + j] += &zpow * scale / &denom;
            zpow *= &z;
        }
    } else {
        // chart w = t/s: D~(w) = prod (b_R - a_R w); local factor is -w
        let mut dpoly = vec![Rat::one()];
        for q in &branches {
            // b_R - a_R w  =  (-a_R) w + b_R
            dpoly = poly_mul_linear_general(&dpoly, q.b(), &-q.a().clone());
        }
        // divide by (-w): drop the constant term (it is zero) and negate
        debug_assert!(dpoly[0].is_zero(), "infinite branch must contribute a -w factor");
        let quot: Vec<Rat> = dpoly[1..].iter().map(|c| -c.clone()).collect();
        let denom = quot[0].clone();
        debug_assert!(!denom.is_zero());
        // residue = g(1, 0) / denom: only the top coefficient of g
        row[offset + d] += scale / &denom;
    }
}

/// Multiply polynomial by (b z + a0) given as roots of b z - a form... here:
/// multiply by (b·z + c0) with c0 passed explicitly.
fn poly_mul_linear_general(p: &[Rat], c0: &Rat, c1: &Rat) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); p.len() + 1];
    for (i, x) in p.iter().enumerate() {
        out[i] += x * c0;
        out[i + 1] += x * c1;
    }
    out
}

/// Multiply polynomial by (c1 z + c0).
fn poly_mul_linear(p: &[Rat], c0: &Rat, c1: &Rat) -> Vec<Rat> {
    poly_mul_linear_general(p, c0, c1)
}

/// Quotient of p by (z - z0); the remainder is ignored (zero at branches).
fn synthetic_div(p: &[Rat], z0: &Rat) -> Vec<Rat> {
    let n = p.len();
    debug_assert!(n >= 2);
    let mut quot = vec![Rat::zero(); n - 1];
    let mut carry = Rat::zero();
    for i in (0..n - 1).rev() {
        let c = &p[i + 1] + &carry;
        carry = &c * z0;
        quot[i] = c;
    }
    quot
}

fn eval_poly(p: &[Rat], z: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in p.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Self-contained dense rank for the oracle's constraint system.
fn dense_rank(mut rows: Vec<Vec<Rat>>, cols: usize) -> usize {
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pr) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let pv = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = &rows[r][col] / &pv;
            for c in col..cols {
                let sub = &f * &rows[rank][c];
                rows[r][c] -= sub;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
