//! Elements of K = F_q(θ).
//!
//! A denominator is kept as `g · Π_j B_j^{b_j}` with `B_j = θ^{q^j} − θ` and `g`
//! monic. Every monic polynomial of degree ≤ d divides `B_1 ⋯ B_d`, and the
//! Frobenius twist maps `B_j` to `B_j^q`, so sums over monic polynomials and
//! Drinfeld exponential coefficients stay inside this form with cheap sparse
//! multiplications. Lowest terms are produced on demand by [`RatFn::reduced`].

use crate::error::{Error, Result};
use crate::field::{Elem, Fq};
use crate::ring::{KAlgebra, Ring};
use crate::upoly::UPoly;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Den {
    g: UPoly,
    b: Vec<u64>,
}

impl Den {
    fn one(f: &Fq) -> Den {
        Den { g: UPoly::one(f), b: Vec::new() }
    }

    fn trim(mut self) -> Den {
        while self.b.last() == Some(&0) {
            self.b.pop();
        }
        self
    }

    fn is_one(&self) -> bool {
        self.g.is_one() && self.b.is_empty()
    }

    fn degree(&self) -> i64 {
        let q = self.g.field().q() as i64;
        let mut d = self.g.deg();
        let mut qj = 1i64;
        for &e in &self.b {
            qj *= q;
            d += e as i64 * qj;
        }
        d
    }

    fn mul(&self, o: &Den) -> Den {
        let n = self.b.len().max(o.b.len());
        let b = (0..n).map(|j| self.b.get(j).copied().unwrap_or(0) + o.b.get(j).copied().unwrap_or(0)).collect();
        Den { g: self.g.mul(&o.g), b }.trim()
    }

    fn twist(&self, i: u32) -> Den {
        let qi = (self.g.field().q() as u64).pow(i);
        Den { g: self.g.twist(i), b: self.b.iter().map(|&e| e * qi).collect() }
    }

    /// Common multiple and the two cofactors.
    fn lcm(&self, o: &Den) -> (Den, Den, Den) {
        let (g, ca, cb) = if self.g == o.g {
            let one = UPoly::one(self.g.field());
            (self.g.clone(), one.clone(), one)
        } else if self.g.is_one() {
            (o.g.clone(), o.g.clone(), UPoly::one(o.g.field()))
        } else if o.g.is_one() {
            (self.g.clone(), UPoly::one(o.g.field()), self.g.clone())
        } else {
            let l = self.g.lcm(&o.g);
            let ca = l.exact_div(&self.g).expect("lcm");
            let cb = l.exact_div(&o.g).expect("lcm");
            (l, ca, cb)
        };
        let n = self.b.len().max(o.b.len());
        let mut b = Vec::with_capacity(n);
        let mut ba = Vec::with_capacity(n);
        let mut bb = Vec::with_capacity(n);
        for j in 0..n {
            let x = self.b.get(j).copied().unwrap_or(0);
            let y = o.b.get(j).copied().unwrap_or(0);
            let m = x.max(y);
            b.push(m);
            ba.push(m - x);
            bb.push(m - y);
        }
        (Den { g, b }.trim(), Den { g: ca, b: ba }.trim(), Den { g: cb, b: bb }.trim())
    }

    /// `x · self` as a polynomial.
    fn mul_into(&self, x: &UPoly) -> UPoly {
        let f = x.field();
        let (p, q) = (f.p() as u64, f.q() as usize);
        let mut r = if self.g.is_one() { x.clone() } else { x.mul(&self.g) };
        let mut qj = 1usize;
        for &e in &self.b {
            qj *= q;
            // B_j^{p^k} = θ^{p^k q^j} − θ^{p^k}.
            let mut e = e;
            let mut pk = 1usize;
            while e > 0 {
                for _ in 0..e % p {
                    r = r.mul_binomial(pk * qj, pk);
                }
                e /= p;
                pk *= p as usize;
            }
        }
        r
    }

    fn expand(&self) -> UPoly {
        self.mul_into(&UPoly::one(self.g.field()))
    }

    /// First `k` coefficients of `u^{deg} · den(1/u)`, a unit power series in u.
    fn rev_series(&self, k: usize) -> Vec<Elem> {
        let f = self.g.field();
        let (p, q) = (f.p() as u64, f.q() as usize);
        let gd = self.g.coeffs();
        let mut s: Vec<Elem> = (0..k).map(|i| if i < gd.len() { gd[gd.len() - 1 - i] } else { 0 }).collect();
        let mut qj = 1usize;
        for &e in &self.b {
            qj *= q;
            let mut e = e;
            let mut pk = 1usize;
            while e > 0 {
                // Reversed B_j^{p^k} is 1 − u^{p^k (q^j − 1)}.
                let step = pk * (qj - 1);
                for _ in 0..e % p {
                    for i in (step..k).rev() {
                        s[i] = f.sub(s[i], s[i - step]);
                    }
                }
                e /= p;
                pk *= p as usize;
            }
        }
        s
    }
}

#[derive(Clone)]
pub struct RatFn {
    num: UPoly,
    den: Den,
}

impl PartialEq for RatFn {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        if self.num.is_zero() || o.num.is_zero() {
            return self.num.is_zero() && o.num.is_zero();
        }
        if self.v_inf() != o.v_inf() {
            return false;
        }
        let (_, ca, cb) = self.den.lcm(&o.den);
        ca.mul_into(&self.num) == cb.mul_into(&o.num)
    }
}
impl Eq for RatFn {}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("T"))
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("T"))
    }
}

impl RatFn {
    /// Reduced fraction `num/den` with monic denominator.
    pub fn new(num: UPoly, den: UPoly) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let f = num.field().clone();
        if num.is_zero() {
            return Ok(RatFn::zero(&f));
        }
        let g = num.gcd(&den);
        let mut n = num.exact_div(&g).expect("gcd divides");
        let mut d = den.exact_div(&g).expect("gcd divides");
        let lc = d.lead();
        if lc != 1 {
            let inv = f.inv(lc);
            n = n.scale(inv);
            d = d.scale(inv);
        }
        Ok(RatFn { num: n, den: Den { g: d, b: Vec::new() } })
    }

    /// `num / Π_j B_j^{b[j-1]}` with `B_j = θ^{q^j} − θ`.
    pub fn over_b(num: UPoly, b: Vec<u64>) -> RatFn {
        let f = num.field().clone();
        if num.is_zero() {
            return RatFn::zero(&f);
        }
        RatFn { num, den: Den { g: UPoly::one(&f), b }.trim() }
    }

    /// `num / ℓ_d^n` with `ℓ_d = B_1 ⋯ B_d`.
    pub fn over_ell(num: UPoly, d: usize, n: u64) -> RatFn {
        RatFn::over_b(num, vec![n; d])
    }

    /// `1/a` for monic `a`, written over `ℓ_{deg a}`.
    pub fn inv_monic(a: &UPoly) -> Result<RatFn> {
        if !a.is_monic() {
            return Err(Error::NotMonic(a.to_text("T")));
        }
        let d = a.deg() as usize;
        let num = ell(a.field(), d).exact_div(a).expect("monic of degree d divides ell_d");
        Ok(RatFn::over_ell(num, d, 1))
    }

    pub fn from_poly(a: UPoly) -> RatFn {
        let f = a.field().clone();
        RatFn { num: a, den: Den::one(&f) }
    }

    pub fn zero(f: &Fq) -> RatFn {
        RatFn::from_poly(UPoly::zero(f))
    }

    pub fn one(f: &Fq) -> RatFn {
        RatFn::from_poly(UPoly::one(f))
    }

    pub fn constant(f: &Fq, a: Elem) -> RatFn {
        RatFn::from_poly(UPoly::constant(f, a))
    }

    pub fn theta(f: &Fq) -> RatFn {
        RatFn::from_poly(UPoly::theta(f))
    }

    pub fn field(&self) -> &Fq {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// Numerator of the stored (not necessarily reduced) fraction.
    pub fn raw_num(&self) -> &UPoly {
        &self.num
    }

    /// Denominator of the stored fraction, expanded.
    pub fn raw_den(&self) -> UPoly {
        self.den.expand()
    }

    /// First `k` coefficients of the reversed numerator and denominator in u = 1/θ.
    pub fn reversed_series(&self, k: usize) -> (Vec<Elem>, Vec<Elem>) {
        let nc = self.num.coeffs();
        let n = (0..k).map(|i| if i < nc.len() { nc[nc.len() - 1 - i] } else { 0 }).collect();
        (n, self.den.rev_series(k))
    }

    pub fn den_degree(&self) -> i64 {
        self.den.degree()
    }

    /// v_∞(x) = deg den − deg num; `None` for zero.
    pub fn v_inf(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.den.degree() - self.num.deg())
        }
    }

    /// Leading coefficient of the numerator; the denominator is monic.
    pub fn sign(&self) -> Elem {
        self.num.lead()
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            let num = self.num.add(&o.num);
            if num.is_zero() {
                return RatFn::zero(self.field());
            }
            return RatFn { num, den: self.den.clone() };
        }
        let (den, ca, cb) = self.den.lcm(&o.den);
        let num = ca.mul_into(&self.num).add(&cb.mul_into(&o.num));
        if num.is_zero() {
            return RatFn::zero(self.field());
        }
        RatFn { num, den }
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero(self.field());
        }
        let (mut n1, mut n2) = (self.num.clone(), o.num.clone());
        let (mut g1, mut g2) = (self.den.g.clone(), o.den.g.clone());
        if !g2.is_one() && !n1.is_constant() {
            let c = n1.gcd(&g2);
            if !c.is_one() {
                n1 = n1.exact_div(&c).unwrap();
                g2 = g2.exact_div(&c).unwrap();
            }
        }
        if !g1.is_one() && !n2.is_constant() {
            let c = n2.gcd(&g1);
            if !c.is_one() {
                n2 = n2.exact_div(&c).unwrap();
                g1 = g1.exact_div(&c).unwrap();
            }
        }
        let d1 = Den { g: g1, b: self.den.b.clone() };
        let d2 = Den { g: g2, b: o.den.b.clone() };
        RatFn { num: n1.mul(&n2), den: d1.mul(&d2) }
    }

    pub fn scale_elem(&self, a: Elem) -> RatFn {
        if a == 0 {
            return RatFn::zero(self.field());
        }
        RatFn { num: self.num.scale(a), den: self.den.clone() }
    }

    pub fn mul_poly(&self, a: &UPoly) -> RatFn {
        self.mul(&RatFn::from_poly(a.clone()))
    }

    pub fn inv(&self) -> Result<RatFn> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        RatFn::new(self.den.expand(), self.num.clone())
    }

    pub fn div(&self, o: &RatFn) -> Result<RatFn> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> RatFn {
        let mut r = RatFn::one(self.field());
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// `x ↦ x^{q^i}`.
    pub fn twist(&self, i: u32) -> RatFn {
        if i == 0 {
            return self.clone();
        }
        RatFn { num: self.num.twist(i), den: self.den.twist(i) }
    }

    /// The polynomial value, if this element lies in A.
    pub fn as_poly(&self) -> Option<UPoly> {
        if self.den.is_one() {
            return Some(self.num.clone());
        }
        let f = self.field();
        let q = f.q() as usize;
        let p = f.p() as u64;
        let mut r = if self.den.g.is_one() { self.num.clone() } else { self.num.exact_div(&self.den.g)? };
        let mut qj = 1usize;
        for &e in &self.den.b {
            qj *= q;
            let mut e = e;
            let mut pk = 1usize;
            while e > 0 {
                for _ in 0..e % p {
                    r = r.div_binomial(pk * qj, pk)?;
                }
                e /= p;
                pk *= p as usize;
            }
        }
        Some(r)
    }

    pub fn is_integral(&self) -> bool {
        self.as_poly().is_some()
    }

    /// Cancels whole factors `B_j` that divide the numerator.
    pub fn tidy(&self) -> RatFn {
        if self.is_zero() {
            return RatFn::zero(self.field());
        }
        let q = self.field().q() as usize;
        let mut num = self.num.clone();
        let mut b = self.den.b.clone();
        for j in (0..b.len()).rev() {
            let qj = q.pow(j as u32 + 1);
            while b[j] > 0 {
                match num.div_binomial(qj, 1) {
                    Some(r) => {
                        num = r;
                        b[j] -= 1;
                    }
                    None => break,
                }
            }
        }
        RatFn { num, den: Den { g: self.den.g.clone(), b }.trim() }
    }

    /// Lowest-terms numerator and monic denominator.
    pub fn reduced(&self) -> (UPoly, UPoly) {
        let t = self.tidy();
        let den = t.den.expand();
        let g = t.num.gcd(&den);
        if t.num.is_zero() {
            return (t.num, UPoly::one(self.field()));
        }
        if g.is_one() {
            return (t.num, den);
        }
        (t.num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
    }

    pub fn to_text(&self, var: &str) -> String {
        let (n, d) = self.reduced();
        if d.is_one() {
            n.to_text(var)
        } else {
            let ns = n.to_text(var);
            let ns = if n.nnz() > 1 { format!("({ns})") } else { ns };
            let ds = d.to_text(var);
            let ds = if d.nnz() > 1 { format!("({ds})") } else { ds };
            format!("{ns}/{ds}")
        }
    }

    /// Parses `a`, `a/b` or `(a)/(b)`.
    pub fn parse(f: &Fq, s: &str, var: &str) -> Result<RatFn> {
        let s = s.trim();
        let strip = |x: &str| -> String {
            let x = x.trim();
            if x.starts_with('(') && x.ends_with(')') {
                x[1..x.len() - 1].to_string()
            } else {
                x.to_string()
            }
        };
        match s.rfind('/') {
            None => Ok(RatFn::from_poly(UPoly::parse(f, &strip(s), var)?)),
            Some(pos) => {
                let n = UPoly::parse(f, &strip(&s[..pos]), var)?;
                let d = UPoly::parse(f, &strip(&s[pos + 1..]), var)?;
                RatFn::new(n, d)
            }
        }
    }
}

/// `ℓ_d = Π_{j=1}^{d} (θ^{q^j} − θ)`, the product of all monic irreducibles of degree ≤ d with multiplicity.
pub fn ell(f: &Fq, d: usize) -> UPoly {
    Den { g: UPoly::one(f), b: vec![1; d] }.expand()
}

impl Ring for RatFn {
    fn q(&self) -> u64 {
        self.field().q() as u64
    }
    fn zero_like(&self) -> Self {
        RatFn::zero(self.field())
    }
    fn one_like(&self) -> Self {
        RatFn::one(self.field())
    }
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFn::add(self, o)
    }
    fn neg(&self) -> Self {
        RatFn::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFn::mul(self, o)
    }
    fn twist(&self, i: u32) -> Self {
        RatFn::twist(self, i)
    }
}

impl KAlgebra for RatFn {
    fn scale(&self, c: &RatFn) -> Self {
        RatFn::mul(self, c)
    }
    fn from_k(&self, c: &RatFn) -> Self {
        c.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(f: &Fq, s: &str) -> RatFn {
        RatFn::parse(f, s, "T").unwrap()
    }

    #[test]
    fn normalize_examples() {
        let f2 = Fq::new(2, 1).unwrap();
        assert_eq!(r(&f2, "(T^2+T)/T").to_text("T"), "T+1");
        assert!(r(&f2, "0/T").is_zero());
        let f3 = Fq::new(3, 1).unwrap();
        assert_eq!(r(&f3, "(2*T)/2").to_text("T"), "T");
        assert!(RatFn::new(UPoly::one(&f3), UPoly::zero(&f3)).is_err());
    }

    #[test]
    fn b_form_matches_reduced_form() {
        let f3 = Fq::new(3, 1).unwrap();
        // 1/(T^3 - T) in both representations.
        let a = RatFn::over_b(UPoly::one(&f3), vec![1]);
        let b = r(&f3, "1/(T^3+2*T)");
        assert_eq!(a, b);
        assert_eq!(a.to_text("T"), "1/(T^3+2*T)");
        let s = a.add(&b.neg());
        assert!(s.is_zero());
    }

    #[test]
    fn twist_is_q_power() {
        let f3 = Fq::new(3, 1).unwrap();
        let x = r(&f3, "(T+1)/(T^2+2)").add(&RatFn::over_b(UPoly::theta(&f3), vec![0, 2]));
        assert_eq!(x.twist(1), x.pow(3));
        assert_eq!(r(&f3, "1/T").twist(1).to_text("T"), "1/T^3");
    }

    #[test]
    fn integrality_through_b_factors() {
        let f2 = Fq::new(2, 1).unwrap();
        let b2 = UPoly::binomial(&f2, 4, 1);
        let x = RatFn::over_b(b2.mul(&UPoly::theta(&f2)), vec![0, 1]);
        assert_eq!(x.as_poly().unwrap(), UPoly::theta(&f2));
        assert!(RatFn::over_b(UPoly::theta(&f2), vec![1]).as_poly().is_none());
    }

    #[test]
    fn valuation() {
        let f2 = Fq::new(2, 1).unwrap();
        assert_eq!(r(&f2, "1/(T^2+T)").v_inf(), Some(2));
        assert_eq!(r(&f2, "T").v_inf(), Some(-1));
    }
}
