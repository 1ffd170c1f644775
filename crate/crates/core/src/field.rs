//! Finite fields F_q with q = p^d.
//!
//! Elements are `u32` codes: the base-p digits of a code are the coefficients of
//! the element as a polynomial in the root `x` of the defining polynomial.

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

pub type Elem = u32;

/// Default bound on q.
pub const FIELD_BOUND: u64 = 1 << 20;

struct FieldData {
    p: u32,
    d: u32,
    q: u32,
    modulus: Vec<u32>,
    gen: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

/// Shared handle to a finite field.
#[derive(Clone)]
pub struct Fq(Arc<FieldData>);

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.d == other.0.d)
    }
}
impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

// Polynomials over F_p as little-endian digit vectors.
fn fp_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let inv_lead = fp_inv(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = (r[top] as u64 * inv_lead as u64 % p as u64) as u32;
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn digits(mut n: u64, p: u32, len: usize) -> Vec<u32> {
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        v.push((n % p as u64) as u32);
        n /= p as u64;
    }
    v
}

fn fp_irreducible(f: &[u32], p: u32) -> bool {
    let d = f.len() - 1;
    for k in 1..=d / 2 {
        let count = (p as u64).pow(k as u32);
        for low in 0..count {
            let mut g = digits(low, p, k);
            g.push(1);
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically least monic irreducible of degree `d` over F_p, comparing
/// coefficient vectors from the top non-leading coefficient down.
fn least_irreducible(p: u32, d: u32) -> Vec<u32> {
    if d == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(d);
    // Counting upward orders (c_{d-1}, ..., c_0) lexicographically.
    for idx in 0..count {
        let mut g = digits(idx, p, d as usize);
        g.push(1);
        if g[0] != 0 && fp_irreducible(&g, p) {
            return g;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Fq {
    pub fn new(p: u64, d: u32) -> Result<Fq> {
        Self::with_bound(p, d, FIELD_BOUND)
    }

    pub fn with_bound(p: u64, d: u32, bound: u64) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if d == 0 {
            return Err(Error::Invalid("extension degree must be positive".into()));
        }
        let q = (p as u128).checked_pow(d).unwrap_or(u128::MAX);
        if q > bound as u128 {
            return Err(Error::FieldTooLarge { p, d, bound });
        }
        let (p32, q32) = (p as u32, q as u32);
        let modulus = least_irreducible(p32, d);
        let mut data = FieldData {
            p: p32,
            d,
            q: q32,
            modulus,
            gen: 0,
            exp: Vec::new(),
            log: Vec::new(),
            add: None,
            neg: (0..q32).map(|a| neg_digits(a, p32, d)).collect(),
        };
        if q32 <= 1024 && d > 1 {
            let mut t = vec![0u32; (q32 * q32) as usize];
            for a in 0..q32 {
                for b in 0..q32 {
                    t[(a * q32 + b) as usize] = add_digits(a, b, p32, d);
                }
            }
            data.add = Some(t);
        }
        build_log_tables(&mut data);
        Ok(Fq(Arc::new(data)))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }
    #[inline]
    pub fn d(&self) -> u32 {
        self.0.d
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }
    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.0.d == 1
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    pub fn generator(&self) -> Elem {
        self.0.gen
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.0;
        if f.d == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else if let Some(t) = &f.add {
            t[(a * f.q + b) as usize]
        } else {
            add_digits(a, b, f.p, f.d)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.0;
        if a == 0 || b == 0 {
            return 0;
        }
        if f.d == 1 {
            return (a as u64 * b as u64 % f.p as u64) as u32;
        }
        f.exp[(f.log[a as usize] + f.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        let f = &*self.0;
        let l = f.log[a as usize];
        f.exp[((f.q - 1 - l) % (f.q - 1)) as usize]
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let f = &*self.0;
        let l = (f.log[a as usize] as u64 * (e % (f.q as u64 - 1))) % (f.q as u64 - 1);
        f.exp[l as usize]
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.0.p as i64) as u32
    }

    /// Discrete logarithm to the fixed generator.
    pub fn log(&self, a: Elem) -> u32 {
        assert!(a != 0, "log of zero");
        self.0.log[a as usize]
    }

    pub fn gen_pow(&self, k: u64) -> Elem {
        self.0.exp[(k % (self.0.q as u64 - 1)) as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.q
    }

    /// Canonical text of an element: an integer for prime fields, `g^k` otherwise.
    pub fn elem_text(&self, a: Elem) -> String {
        if self.is_prime_field() || a <= 1 {
            a.to_string()
        } else {
            format!("g^{}", self.log(a))
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        if let Some(k) = s.strip_prefix("g^") {
            let k: u64 = k.parse().map_err(|_| Error::Parse(s.to_string()))?;
            return Ok(self.gen_pow(k));
        }
        if s == "g" {
            return Ok(self.gen_pow(1));
        }
        let n: i64 = s.parse().map_err(|_| Error::Parse(s.to_string()))?;
        Ok(self.from_int(n))
    }
}

fn add_digits(mut a: u32, mut b: u32, p: u32, d: u32) -> u32 {
    let mut r = 0u32;
    let mut w = 1u32;
    for _ in 0..d {
        r += ((a % p + b % p) % p) * w;
        a /= p;
        b /= p;
        w = w.wrapping_mul(p);
    }
    r
}

fn neg_digits(mut a: u32, p: u32, d: u32) -> u32 {
    let mut r = 0u32;
    let mut w = 1u32;
    for _ in 0..d {
        r += ((p - a % p) % p) * w;
        a /= p;
        w = w.wrapping_mul(p);
    }
    r
}

fn mul_raw(a: u32, b: u32, f: &FieldData) -> u32 {
    let (p, d) = (f.p, f.d as usize);
    let da = digits(a as u64, p, d);
    let db = digits(b as u64, p, d);
    let mut prod = vec![0u32; 2 * d];
    for i in 0..d {
        for j in 0..d {
            prod[i + j] = ((prod[i + j] as u64 + da[i] as u64 * db[j] as u64) % p as u64) as u32;
        }
    }
    let r = fp_rem(&prod, &f.modulus, p);
    let mut code = 0u64;
    for &c in r.iter().rev() {
        code = code * p as u64 + c as u64;
    }
    code as u32
}

fn build_log_tables(f: &mut FieldData) {
    let q = f.q;
    let order = q - 1;
    let factors: Vec<u32> = (2..=order).filter(|&k| order % k == 0 && is_prime(k as u64)).collect();
    let pow_raw = |a: u32, mut e: u32, f: &FieldData| {
        let mut r = 1u32;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = mul_raw(r, b, f);
            }
            b = mul_raw(b, b, f);
            e >>= 1;
        }
        r
    };
    let gen = if q == 2 {
        1
    } else {
        (2..q)
            .find(|&g| factors.iter().all(|&l| pow_raw(g, order / l, f) != 1))
            .expect("multiplicative group is cyclic")
    };
    let mut exp = vec![0u32; 2 * order as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u32;
    for k in 0..order {
        exp[k as usize] = x;
        exp[(k + order) as usize] = x;
        log[x as usize] = k;
        x = mul_raw(x, gen, f);
    }
    f.gen = gen;
    f.exp = exp;
    f.log = log;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_modulus() {
        let f = Fq::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.q(), 4);
    }

    #[test]
    fn prime_fields() {
        assert_eq!(Fq::new(2, 1).unwrap().q(), 2);
        assert_eq!(Fq::new(3, 1).unwrap().q(), 3);
        assert!(matches!(Fq::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(Fq::new(2, 21), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn frobenius_fixes_everything() {
        for (p, d) in [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (5, 2), (3, 4)] {
            let f = Fq::new(p, d).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(a, f.q() as u64), a, "x^q = x in F_{}", f.q());
            }
        }
    }

    #[test]
    fn field_axioms_f9() {
        let f = Fq::new(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for b in f.elements() {
                for c in f.elements() {
                    let lhs = f.mul(a, f.add(b, c));
                    let rhs = f.add(f.mul(a, b), f.mul(a, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn deterministic_construction() {
        let a = Fq::new(3, 3).unwrap();
        let b = Fq::new(3, 3).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.generator(), b.generator());
    }

    #[test]
    fn element_text_roundtrip() {
        let f = Fq::new(2, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse_elem(&f.elem_text(a)).unwrap(), a);
        }
    }
}
