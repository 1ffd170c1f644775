//! Finite residue fields F_q[y]/(R) and characteristic polynomials over F_q.

use crate::field::{Elem, Fq};
use crate::upoly::UPoly;

/// Square matrix over F_q, row-major.
pub type Matrix = Vec<Vec<Elem>>;

/// `det(θ·I − M)` as a monic polynomial in θ, by fraction-free elimination over F_q[θ].
pub fn charpoly(f: &Fq, m: &Matrix) -> UPoly {
    let n = m.len();
    let mut a: Vec<Vec<UPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = UPoly::constant(f, f.neg(m[i][j]));
                    if i == j {
                        c.add(&UPoly::theta(f))
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let mut sign = false;
    let mut prev = UPoly::one(f);
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return UPoly::zero(f);
        };
        if piv != k {
            a.swap(piv, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = UPoly::zero(f);
        }
        prev = a[k][k].clone();
    }
    let d = if n == 0 { UPoly::one(f) } else { a[n - 1][n - 1].clone() };
    if sign {
        d.neg()
    } else {
        d
    }
}

/// The field F_q[y]/(R) with a distinguished image `θ̄` of θ.
#[derive(Clone, Debug)]
pub struct ResidueField {
    f: Fq,
    modulus: UPoly,
    theta_bar: UPoly,
}

impl ResidueField {
    /// Degree-`m` extension of F_q with `θ̄` a root of the irreducible `q_poly` (deg divides m).
    pub fn new(f: &Fq, m: usize, q_poly: &UPoly) -> ResidueField {
        let modulus = UPoly::monics(f, m).find(|r| r.is_irreducible()).expect("irreducibles exist");
        let mut rf = ResidueField { f: f.clone(), modulus, theta_bar: UPoly::zero(f) };
        let root = rf.elements().find(|x| rf.eval(q_poly, x).is_zero()).expect("residue field contains a root");
        rf.theta_bar = root;
        rf
    }

    pub fn field(&self) -> &Fq {
        &self.f
    }

    pub fn dim(&self) -> usize {
        self.modulus.deg() as usize
    }

    pub fn size(&self) -> u64 {
        (self.f.q() as u64).pow(self.dim() as u32)
    }

    pub fn theta_bar(&self) -> &UPoly {
        &self.theta_bar
    }

    pub fn elements(&self) -> impl Iterator<Item = UPoly> + '_ {
        let m = self.dim();
        let q = self.f.q() as u64;
        (0..q.pow(m as u32)).map(move |mut idx| {
            let mut c = Vec::with_capacity(m);
            for _ in 0..m {
                c.push((idx % q) as Elem);
                idx /= q;
            }
            UPoly::from_coeffs(&self.f, c)
        })
    }

    pub fn mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.mul(b).rem(&self.modulus)
    }

    /// `x^{q^i}`.
    pub fn frob(&self, x: &UPoly, i: u32) -> UPoly {
        x.pow_mod((self.f.q() as u128).pow(i), &self.modulus)
    }

    /// Image of a polynomial in θ.
    pub fn eval(&self, a: &UPoly, at: &UPoly) -> UPoly {
        let mut acc = UPoly::zero(&self.f);
        for &c in a.coeffs().iter().rev() {
            acc = self.mul(&acc, at).add(&UPoly::constant(&self.f, c));
        }
        acc
    }

    pub fn to_vec(&self, x: &UPoly) -> Vec<Elem> {
        (0..self.dim()).map(|i| x.coeff(i)).collect()
    }

    pub fn from_vec(&self, v: &[Elem]) -> UPoly {
        UPoly::from_coeffs(&self.f, v.to_vec())
    }

    /// Matrix of an F_q-linear map given on the power basis; columns are images.
    pub fn matrix_of(&self, g: impl Fn(&UPoly) -> UPoly) -> Matrix {
        let m = self.dim();
        let cols: Vec<Vec<Elem>> = (0..m).map(|j| self.to_vec(&g(&UPoly::monomial(&self.f, 1, j)))).collect();
        (0..m).map(|i| (0..m).map(|j| cols[j][i]).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn companion_charpoly() {
        let f3 = Fq::new(3, 1).unwrap();
        let q = UPoly::parse(&f3, "T^3+2*T+1", "T").unwrap();
        let rf = ResidueField::new(&f3, 3, &q);
        let m = rf.matrix_of(|x| rf.mul(x, rf.theta_bar()));
        assert_eq!(charpoly(&f3, &m), q);
    }

    #[test]
    fn charpoly_of_identity() {
        let f2 = Fq::new(2, 1).unwrap();
        let m = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(charpoly(&f2, &m).to_text("T"), "T^2+1");
    }
}
