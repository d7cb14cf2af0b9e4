//! Homogeneous binary forms with rational coefficients.
//!
//! A section of a line bundle restricts to each rational component as one of
//! these. Degree may be negative, in which case the only form is zero (empty
//! coefficient vector).

use num_traits::{One, Zero};

use crate::rat::Rat;

/// Binary form of fixed degree in component coordinates (s : t).
/// `coeffs[j]` multiplies `s^j t^(deg-j)`; a negative degree stores nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinForm {
    deg: i64,
    coeffs: Vec<Rat>,
}

impl BinForm {
    pub fn zero(deg: i64) -> Self {
        let len = if deg >= 0 { deg as usize + 1 } else { 0 };
        BinForm { deg, coeffs: vec![Rat::zero(); len] }
    }

    pub fn from_coeffs(deg: i64, coeffs: Vec<Rat>) -> Self {
        if deg < 0 {
            assert!(coeffs.is_empty(), "negative degree form must be empty");
        } else {
            assert_eq!(coeffs.len(), deg as usize + 1, "coefficient count mismatch");
        }
        BinForm { deg, coeffs }
    }

    /// The monomial s^j t^(deg-j).
    pub fn monomial(deg: i64, j: usize) -> Self {
        let mut f = Self::zero(deg);
        f.coeffs[j] = Rat::one();
        f
    }

    /// Linear form b·s − a·t vanishing at the point (a : b).
    pub fn vanishing_at(a: &Rat, b: &Rat) -> Self {
        BinForm { deg: 1, coeffs: vec![-a.clone(), b.clone()] }
    }

    pub fn degree(&self) -> i64 {
        self.deg
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Evaluate at the representative (a, b): sum of c_j a^j b^(deg-j).
    pub fn eval(&self, a: &Rat, b: &Rat) -> Rat {
        if self.deg < 0 {
            return Rat::zero();
        }
        if b.is_one() {
            let mut acc = Rat::zero();
            for c in self.coeffs.iter().rev() {
                acc = acc * a + c;
            }
            acc
        } else {
            let mut acc = Rat::zero();
            let mut bpow = Rat::one();
            for c in self.coeffs.iter().rev() {
                acc = acc * a + c * &bpow;
                bpow *= b;
            }
            acc
        }
    }

    pub fn mul(&self, other: &BinForm) -> BinForm {
        let deg = self.deg + other.deg;
        let mut out = BinForm::zero(deg);
        if deg < 0 {
            return out;
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn add(&self, other: &BinForm) -> BinForm {
        assert_eq!(self.deg, other.deg, "degree mismatch in add");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        BinForm { deg: self.deg, coeffs }
    }

    pub fn scale(&self, c: &Rat) -> BinForm {
        BinForm { deg: self.deg, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }
}

/// Degree of the gcd of a set of forms, or None when every form is zero.
/// Used for exact base-locus detection on a component.
pub fn gcd_degree(forms: &[&BinForm]) -> Option<i64> {
    let nonzero: Vec<&&BinForm> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return None;
    }
    // Split each form as t^a * P(z) with z = s/t; gcd = t^(min a) * gcd(P).
    let mut t_mult = i64::MAX;
    let mut acc: Option<Vec<Rat>> = None;
    for f in nonzero {
        let top = f.coeffs.iter().rposition(|c| !c.is_zero()).expect("nonzero form");
        t_mult = t_mult.min(f.deg - top as i64);
        let poly: Vec<Rat> = f.coeffs[..=top].to_vec();
        acc = Some(match acc {
            None => poly,
            Some(g) => poly_gcd(&g, &poly),
        });
        if let Some(g) = &acc {
            if g.len() == 1 && t_mult == 0 {
                return Some(0);
            }
        }
    }
    let g = acc.expect("at least one nonzero form");
    Some((g.len() as i64 - 1) + t_mult)
}

/// Monic gcd of two univariate polynomials (ascending coefficients).
fn poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let trim = |p: &[Rat]| -> Vec<Rat> {
        let top = p.iter().rposition(|c| !c.is_zero());
        match top {
            None => vec![],
            Some(t) => p[..=t].to_vec(),
        }
    };
    let mut a = trim(a);
    let mut b = trim(b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = trim(&r);
    }
    if a.is_empty() {
        return vec![Rat::one()];
    }
    let lead = a.last().unwrap().clone();
    a.iter().map(|c| c / &lead).collect()
}

/// Remainder of polynomial division a mod b (b nonzero, trimmed).
fn poly_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    while r.len() > db {
        let top = match r.iter().rposition(|c| !c.is_zero()) {
            Some(t) if t >= db => t,
            _ => break,
        };
        let f = &r[top] / lead;
        for (i, bc) in b.iter().enumerate() {
            let sub = &f * bc;
            r[top - db + i] -= sub;
        }
    }
    r
}
