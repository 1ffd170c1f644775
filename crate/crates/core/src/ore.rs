//! Twisted polynomials `Σ c_i τ^i` with `τ c = c^q τ`, and truncated τ-series.

use crate::error::{Error, Result};
use crate::ratfn::RatFn;
use crate::ring::{KAlgebra, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct OrePoly<C: Ring> {
    proto: C,
    c: Vec<C>,
}

impl<C: Ring> OrePoly<C> {
    pub fn new(proto: &C, mut c: Vec<C>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        OrePoly { proto: proto.zero_like(), c }
    }

    pub fn zero(proto: &C) -> Self {
        OrePoly::new(proto, Vec::new())
    }

    pub fn one(proto: &C) -> Self {
        OrePoly::new(proto, vec![proto.one_like()])
    }

    pub fn constant(c: C) -> Self {
        let proto = c.zero_like();
        OrePoly::new(&proto, vec![c])
    }

    /// `τ^k`.
    pub fn tau_pow(proto: &C, k: usize) -> Self {
        let mut c = vec![proto.zero_like(); k + 1];
        c[k] = proto.one_like();
        OrePoly::new(proto, c)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> C {
        self.c.get(i).cloned().unwrap_or_else(|| self.proto.clone())
    }

    /// τ-degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect();
        OrePoly::new(&self.proto, c)
    }

    pub fn neg(&self) -> Self {
        OrePoly::new(&self.proto, self.c.iter().map(|x| x.neg()).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// `(Σ a_i τ^i)(Σ b_j τ^j) = Σ_k (Σ_{i+j=k} a_i b_j^{q^i}) τ^k`.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return OrePoly::zero(&self.proto);
        }
        let mut c = vec![self.proto.clone(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                c[i + j] = c[i + j].add(&a.mul(&b.twist(i as u32)));
            }
        }
        OrePoly::new(&self.proto, c)
    }

    /// Left multiplication by a scalar.
    pub fn scale_left(&self, a: &C) -> Self {
        OrePoly::new(&self.proto, self.c.iter().map(|x| a.mul(x)).collect())
    }

    /// `Σ c_i x^{q^i}` for `x` in the coefficient ring.
    pub fn apply(&self, x: &C) -> C {
        let mut acc = self.proto.clone();
        for (i, c) in self.c.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&c.mul(&x.twist(i as u32)));
            }
        }
        acc
    }

    /// Coefficientwise twist `c_i ↦ c_i^{q^k}`.
    pub fn twist_coeffs(&self, k: u32) -> Self {
        OrePoly::new(&self.proto, self.c.iter().map(|x| x.twist(k)).collect())
    }

    pub fn map<D: Ring>(&self, proto: &D, g: impl Fn(&C) -> D) -> OrePoly<D> {
        OrePoly::new(proto, self.c.iter().map(g).collect())
    }
}

impl OrePoly<RatFn> {
    /// `Σ c_i x^{q^i}` for `x` in a K-algebra.
    pub fn apply_k<T: KAlgebra>(&self, x: &T) -> T {
        let mut acc = x.zero_like();
        for (i, c) in self.c.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&x.twist(i as u32).scale(c));
            }
        }
        acc
    }
}

/// `Σ_{i<N} c_i τ^i + O(τ^N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TauSeries<C: Ring> {
    c: Vec<C>,
}

impl<C: Ring> TauSeries<C> {
    /// Series of order `n` from the given leading coefficients (padded with zeros).
    pub fn new(proto: &C, mut c: Vec<C>, n: usize) -> Self {
        c.truncate(n);
        while c.len() < n {
            c.push(proto.zero_like());
        }
        TauSeries { c }
    }

    pub fn from_ore(a: &OrePoly<C>, n: usize) -> Self {
        TauSeries::new(&a.proto, a.c.clone(), n)
    }

    pub fn order(&self) -> usize {
        self.c.len()
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.c.len().min(o.c.len());
        let proto = self.c[0].zero_like();
        let mut c = vec![proto.clone(); n];
        for (i, a) in self.c.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    c[i + j] = c[i + j].add(&a.mul(&b.twist(i as u32)));
                }
            }
        }
        TauSeries { c }
    }

    pub fn is_one(&self) -> bool {
        self.c.iter().enumerate().all(|(i, x)| if i == 0 { *x == x.one_like() } else { x.is_zero() })
    }

    /// Two-sided inverse to order `n`; requires `c_0 = 1`.
    pub fn invert(&self, n: usize) -> Result<Self> {
        let f0 = self.c.first().ok_or(Error::BadConstantTerm)?;
        if *f0 != f0.one_like() {
            return Err(Error::BadConstantTerm);
        }
        let n = n.min(self.c.len());
        let mut g: Vec<C> = vec![f0.one_like()];
        for k in 1..n {
            let mut s = f0.zero_like();
            for i in 1..=k {
                let fi = &self.c[i];
                if !fi.is_zero() {
                    s = s.add(&fi.mul(&g[k - i].twist(i as u32)));
                }
            }
            g.push(s.neg());
        }
        Ok(TauSeries { c: g })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Fq, UPoly};

    fn rf(f: &Fq, s: &str) -> RatFn {
        RatFn::parse(f, s, "T").unwrap()
    }

    #[test]
    fn commutation_rule() {
        let f3 = Fq::new(3, 1).unwrap();
        let zero = RatFn::zero(&f3);
        let tau = OrePoly::tau_pow(&zero, 1);
        let th = OrePoly::constant(RatFn::theta(&f3));
        let prod = tau.mul(&th);
        assert_eq!(prod.coeffs(), &[zero.clone(), rf(&f3, "T^3")]);
    }

    #[test]
    fn carlitz_square() {
        for p in [2u64, 3] {
            let f = Fq::new(p, 1).unwrap();
            let zero = RatFn::zero(&f);
            let phi = OrePoly::new(&zero, vec![RatFn::theta(&f), RatFn::one(&f)]);
            let sq = phi.mul(&phi);
            let t = UPoly::theta(&f);
            let expect = vec![
                RatFn::from_poly(t.mul(&t)),
                RatFn::from_poly(t.add(&t.twist(1))),
                RatFn::one(&f),
            ];
            assert_eq!(sq.coeffs(), expect.as_slice());
        }
    }

    #[test]
    fn apply_torsion_point() {
        // q = 3, λ^2 = −θ: φ_θ(λ) = θλ + λ^3 = 0, checked in K[X]/(X^2+θ) by hand.
        let f3 = Fq::new(3, 1).unwrap();
        let zero = RatFn::zero(&f3);
        let phi = OrePoly::new(&zero, vec![RatFn::theta(&f3), RatFn::one(&f3)]);
        let x = crate::MPoly::var(1, true, 0, &zero);
        let img = phi.apply_k(&x);
        assert_eq!(img.len(), 2);
    }

    #[test]
    fn inverse_is_two_sided() {
        let f2 = Fq::new(2, 1).unwrap();
        let zero = RatFn::zero(&f2);
        let s = TauSeries::new(&zero, vec![RatFn::one(&f2), rf(&f2, "T/(T+1)"), rf(&f2, "1/T^2")], 5);
        let g = s.invert(5).unwrap();
        assert!(s.mul(&g).is_one());
        assert!(g.mul(&s).is_one());
        assert_eq!(g.invert(5).unwrap(), s);
        let bad = TauSeries::new(&zero, vec![RatFn::theta(&f2)], 3);
        assert!(bad.invert(3).is_err());
    }
}
