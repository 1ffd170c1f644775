//! Univariate polynomials over F_q in the variable θ (written `T`).

use crate::error::{Error, Result};
use crate::field::{Elem, Fq};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

#[derive(Clone)]
pub struct UPoly {
    f: Fq,
    c: Vec<Elem>,
}

impl PartialEq for UPoly {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}
impl Eq for UPoly {}

impl Hash for UPoly {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.c.hash(h)
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for UPoly {
    fn cmp(&self, o: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&o.c.len())
            .then_with(|| self.c.iter().rev().cmp(o.c.iter().rev()))
    }
}
impl PartialOrd for UPoly {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("T"))
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("T"))
    }
}

const KARATSUBA_MIN: usize = 48;

impl UPoly {
    pub fn from_coeffs(f: &Fq, mut c: Vec<Elem>) -> UPoly {
        while c.last() == Some(&0) {
            c.pop();
        }
        UPoly { f: f.clone(), c }
    }

    /// Uniformly random polynomial of degree at most `deg`.
    pub fn random(f: &Fq, rng: &mut impl rand::Rng, deg: usize) -> UPoly {
        UPoly::from_coeffs(f, (0..=deg).map(|_| rng.gen_range(0..f.q())).collect())
    }

    /// Uniformly random monic polynomial of degree `deg`.
    pub fn random_monic(f: &Fq, rng: &mut impl rand::Rng, deg: usize) -> UPoly {
        let mut c: Vec<Elem> = (0..deg).map(|_| rng.gen_range(0..f.q())).collect();
        c.push(1);
        UPoly::from_coeffs(f, c)
    }

    pub fn zero(f: &Fq) -> UPoly {
        UPoly { f: f.clone(), c: Vec::new() }
    }

    pub fn one(f: &Fq) -> UPoly {
        UPoly::constant(f, 1)
    }

    pub fn constant(f: &Fq, a: Elem) -> UPoly {
        UPoly::from_coeffs(f, vec![a])
    }

    /// θ.
    pub fn theta(f: &Fq) -> UPoly {
        UPoly::monomial(f, 1, 1)
    }

    pub fn monomial(f: &Fq, a: Elem, k: usize) -> UPoly {
        if a == 0 {
            return UPoly::zero(f);
        }
        let mut c = vec![0; k + 1];
        c[k] = a;
        UPoly { f: f.clone(), c }
    }

    /// θ^a − θ^b.
    pub fn binomial(f: &Fq, a: usize, b: usize) -> UPoly {
        let mut c = vec![0; a.max(b) + 1];
        c[a] = f.add(c[a], 1);
        c[b] = f.sub(c[b], 1);
        UPoly::from_coeffs(f, c)
    }

    pub fn field(&self) -> &Fq {
        &self.f
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Elem {
        self.c.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == 1
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with −1 for zero.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lead(&self) -> Elem {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn nnz(&self) -> usize {
        self.c.iter().filter(|&&x| x != 0).count()
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let f = &self.f;
        let (long, short) = if self.c.len() >= o.c.len() { (self, o) } else { (o, self) };
        let mut c = long.c.clone();
        for (i, &b) in short.c.iter().enumerate() {
            c[i] = f.add(c[i], b);
        }
        UPoly::from_coeffs(f, c)
    }

    pub fn add_assign(&mut self, o: &UPoly) {
        if self.c.len() < o.c.len() {
            self.c.resize(o.c.len(), 0);
        }
        for (i, &b) in o.c.iter().enumerate() {
            self.c[i] = self.f.add(self.c[i], b);
        }
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    /// self += a · o.
    pub fn add_scaled_assign(&mut self, a: Elem, o: &UPoly) {
        if a == 0 {
            return;
        }
        if self.c.len() < o.c.len() {
            self.c.resize(o.c.len(), 0);
        }
        let f = &self.f;
        for (i, &b) in o.c.iter().enumerate() {
            if b != 0 {
                self.c[i] = f.add(self.c[i], f.mul(a, b));
            }
        }
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    pub fn neg(&self) -> UPoly {
        let f = &self.f;
        UPoly { f: f.clone(), c: self.c.iter().map(|&x| f.neg(x)).collect() }
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: Elem) -> UPoly {
        if a == 0 {
            return UPoly::zero(&self.f);
        }
        let f = &self.f;
        UPoly { f: f.clone(), c: self.c.iter().map(|&x| f.mul(a, x)).collect() }
    }

    /// Multiply by θ^k.
    pub fn shift(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        UPoly { f: self.f.clone(), c }
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero(&self.f);
        }
        let (na, nb) = (self.nnz(), o.nnz());
        let c = if na.min(nb) <= 8 || na * 4 < self.c.len() || nb * 4 < o.c.len() {
            sparse_mul(&self.f, &self.c, &o.c)
        } else {
            dense_mul(&self.f, &self.c, &o.c)
        };
        UPoly::from_coeffs(&self.f, c)
    }

    /// Multiply by θ^a − θ^b.
    pub fn mul_binomial(&self, a: usize, b: usize) -> UPoly {
        self.shift(a).sub(&self.shift(b))
    }

    /// Exact division by θ^a − θ^b with a > b; `None` if not divisible.
    pub fn div_binomial(&self, a: usize, b: usize) -> Option<UPoly> {
        assert!(a > b);
        if self.is_zero() {
            return Some(self.clone());
        }
        let f = &self.f;
        if self.c[..b.min(self.c.len())].iter().any(|&x| x != 0) {
            return None;
        }
        let x = &self.c[b..];
        let k = a - b;
        let n = x.len() - 1;
        if n < k {
            return None;
        }
        // x = y·(θ^k − 1): x_j = y_{j−k} − y_j.
        let mut y = vec![0; n - k + 1];
        for j in (k..=n).rev() {
            let yj = if j <= n - k { y[j] } else { 0 };
            y[j - k] = f.add(x[j], yj);
        }
        for (j, &xj) in x.iter().enumerate().take(k) {
            let yj = if j <= n - k { y[j] } else { 0 };
            if f.add(xj, yj) != 0 {
                return None;
            }
        }
        Some(UPoly::from_coeffs(f, y))
    }

    pub fn pow(&self, mut e: u64) -> UPoly {
        let mut r = UPoly::one(&self.f);
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

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let f = &self.f;
        if self.c.len() < d.c.len() {
            return (UPoly::zero(f), self.clone());
        }
        let dn = d.c.len() - 1;
        if d.nnz() <= 4 && dn > 0 {
            return self.divrem_sparse(d);
        }
        let inv = f.inv(d.lead());
        let mut r = self.c.clone();
        let mut qv = vec![0; self.c.len() - dn];
        for top in (dn..r.len()).rev() {
            let t = r[top];
            if t == 0 {
                continue;
            }
            let c = f.mul(t, inv);
            qv[top - dn] = c;
            let shift = top - dn;
            for (i, &di) in d.c.iter().enumerate() {
                if di != 0 {
                    r[shift + i] = f.sub(r[shift + i], f.mul(c, di));
                }
            }
        }
        r.truncate(dn);
        (UPoly::from_coeffs(f, qv), UPoly::from_coeffs(f, r))
    }

    fn divrem_sparse(&self, d: &UPoly) -> (UPoly, UPoly) {
        let f = &self.f;
        let dn = d.c.len() - 1;
        let inv = f.inv(d.lead());
        let terms: Vec<(usize, Elem)> =
            d.c.iter().enumerate().filter(|(i, &x)| x != 0 && *i < dn).map(|(i, &x)| (i, x)).collect();
        let mut r = self.c.clone();
        let mut qv = vec![0; self.c.len() - dn];
        for top in (dn..r.len()).rev() {
            let t = r[top];
            if t == 0 {
                continue;
            }
            let c = f.mul(t, inv);
            qv[top - dn] = c;
            r[top] = 0;
            let shift = top - dn;
            for &(i, di) in &terms {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, di));
            }
        }
        r.truncate(dn);
        (UPoly::from_coeffs(f, qv), UPoly::from_coeffs(f, r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).1
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn make_monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.f.inv(self.lead()))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn lcm(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero(&self.f);
        }
        let g = self.gcd(o);
        self.exact_div(&g).expect("gcd divides").mul(o).make_monic()
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.f;
        self.c.iter().rev().fold(0, |acc, &a| f.add(f.mul(acc, x), a))
    }

    /// θ ↦ θ^{q^i}; F_q coefficients are fixed by the q-power map.
    pub fn twist(&self, i: u32) -> UPoly {
        if i == 0 || self.c.len() <= 1 {
            return self.clone();
        }
        let step = (self.f.q() as usize).pow(i);
        let mut c = vec![0; (self.c.len() - 1) * step + 1];
        for (k, &a) in self.c.iter().enumerate() {
            c[k * step] = a;
        }
        UPoly { f: self.f.clone(), c }
    }

    pub fn derivative(&self) -> UPoly {
        let f = &self.f;
        let c = self.c.iter().enumerate().skip(1).map(|(k, &a)| f.mul(f.from_int(k as i64), a)).collect();
        UPoly::from_coeffs(f, c)
    }

    /// Substitute θ ↦ `x` in a ring supporting the operations given.
    pub fn horner<T: Clone>(&self, x: &T, zero: T, lift: impl Fn(Elem) -> T, add: impl Fn(&T, &T) -> T, mul: impl Fn(&T, &T) -> T) -> T {
        let mut acc = zero;
        for &a in self.c.iter().rev() {
            acc = add(&mul(&acc, x), &lift(a));
        }
        acc
    }

    /// `self^{e} mod m` by square and multiply.
    pub fn pow_mod(&self, mut e: u128, m: &UPoly) -> UPoly {
        let mut r = UPoly::one(&self.f).rem(m);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b).rem(m);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b).rem(m);
            }
        }
        r
    }

    /// Rabin-style irreducibility test over F_q.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let q = self.f.q() as u128;
        let t = UPoly::theta(&self.f);
        let mut tq = t.clone();
        for _ in 1..=n / 2 {
            tq = tq.pow_mod(q, self);
            if !tq.sub(&t).gcd(self).is_one() {
                return false;
            }
        }
        true
    }

    /// The `idx`-th monic polynomial of degree `d`; lower coefficients are the base-q digits of `idx`.
    pub fn monic_from_index(f: &Fq, d: usize, mut idx: u64) -> UPoly {
        let q = f.q() as u64;
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push((idx % q) as Elem);
            idx /= q;
        }
        c.push(1);
        UPoly { f: f.clone(), c }
    }

    /// All monic polynomials of degree `d` in index order.
    pub fn monics(f: &Fq, d: usize) -> impl Iterator<Item = UPoly> + '_ {
        let count = (f.q() as u64).pow(d as u32);
        (0..count).map(move |i| UPoly::monic_from_index(f, d, i))
    }

    pub fn irreducibles(f: &Fq, d: usize) -> Vec<UPoly> {
        UPoly::monics(f, d).filter(|a| a.is_irreducible()).collect()
    }

    /// Factorization of a monic polynomial by trial division, factors ascending.
    pub fn factor_monic(&self) -> Vec<(UPoly, u32)> {
        assert!(self.is_monic(), "factor_monic needs a monic input");
        let mut rest = self.clone();
        let mut out = Vec::new();
        let mut d = 1;
        while rest.deg() >= 2 * d as i64 {
            for p in UPoly::irreducibles(&self.f, d) {
                let mut k = 0;
                while let Some(qt) = rest.exact_div(&p) {
                    rest = qt;
                    k += 1;
                }
                if k > 0 {
                    out.push((p, k));
                }
            }
            d += 1;
        }
        if rest.deg() > 0 {
            out.push((rest, 1));
        }
        out.sort();
        out
    }

    /// Canonical text: `c*V^k` terms joined by `+`, descending.
    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for k in (0..self.c.len()).rev() {
            let a = self.c[k];
            if a == 0 {
                continue;
            }
            let cs = self.f.elem_text(a);
            let term = match (k, a == 1) {
                (0, _) => cs,
                (1, true) => var.to_string(),
                (1, false) => format!("{cs}*{var}"),
                (_, true) => format!("{var}^{k}"),
                (_, false) => format!("{cs}*{var}^{k}"),
            };
            parts.push(term);
        }
        parts.join("+")
    }

    /// Parse a sum of `c*V^k` terms; `-` separators negate the following term.
    pub fn parse(f: &Fq, s: &str, var: &str) -> Result<UPoly> {
        let mut acc = UPoly::zero(f);
        for (sign, term) in split_terms(s)? {
            let (coef, k) = parse_term(f, &term, var)?;
            let coef = if sign { f.neg(coef) } else { coef };
            acc = acc.add(&UPoly::monomial(f, coef, k));
        }
        Ok(acc)
    }
}

/// Splits `a+b-c` into signed terms; `true` marks negation.
pub(crate) fn split_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        let starts_term = (ch == '+' || ch == '-') && !matches!(prev, None | Some('^') | Some('*'));
        if starts_term {
            if cur.is_empty() {
                return Err(Error::Parse(s.clone()));
            }
            out.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if ch == '-' && prev.is_none() {
            neg = true;
        } else {
            cur.push(ch);
        }
        prev = Some(ch);
    }
    if cur.is_empty() {
        return Err(Error::Parse(s));
    }
    out.push((neg, cur));
    Ok(out)
}

fn parse_term(f: &Fq, t: &str, var: &str) -> Result<(Elem, usize)> {
    let bad = || Error::Parse(t.to_string());
    let (coef, rest) = match t.find(var) {
        None => return Ok((f.parse_elem(t)?, 0)),
        Some(0) => (1, &t[var.len()..]),
        Some(pos) => {
            let cs = t[..pos].strip_suffix('*').ok_or_else(bad)?;
            (f.parse_elem(cs)?, &t[pos + var.len()..])
        }
    };
    let k = if rest.is_empty() {
        1
    } else {
        rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
    };
    Ok((coef, k))
}

fn sparse_mul(f: &Fq, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let (a, b) = if a.iter().filter(|&&x| x != 0).count() <= b.iter().filter(|&&x| x != 0).count() {
        (a, b)
    } else {
        (b, a)
    };
    let mut c = vec![0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        if ai == 1 {
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    c[i + j] = f.add(c[i + j], bj);
                }
            }
        } else {
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    c[i + j] = f.add(c[i + j], f.mul(ai, bj));
                }
            }
        }
    }
    c
}

fn dense_mul(f: &Fq, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.len().min(b.len()) >= KARATSUBA_MIN {
        return karatsuba(f, a, b);
    }
    schoolbook(f, a, b)
}

fn schoolbook(f: &Fq, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len() + b.len() - 1;
    if f.is_prime_field() && f.p() < (1 << 16) {
        let p = f.p() as u64;
        let mut acc = vec![0u64; n];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let ai = ai as u64;
            for (j, &bj) in b.iter().enumerate() {
                acc[i + j] += ai * bj as u64;
            }
        }
        return acc.into_iter().map(|x| (x % p) as Elem).collect();
    }
    let mut c = vec![0; n];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                c[i + j] = f.add(c[i + j], f.mul(ai, bj));
            }
        }
    }
    c
}

fn add_into(f: &Fq, dst: &mut [Elem], src: &[Elem]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = f.add(*d, s);
    }
}

fn karatsuba(f: &Fq, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.len().min(b.len()) < KARATSUBA_MIN {
        return schoolbook(f, a, b);
    }
    let m = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(m.min(a.len()));
    let (b0, b1) = b.split_at(m.min(b.len()));
    if a1.is_empty() || b1.is_empty() {
        return schoolbook(f, a, b);
    }
    let z0 = karatsuba(f, a0, b0);
    let z2 = karatsuba(f, a1, b1);
    let mut sa = a0.to_vec();
    if sa.len() < a1.len() {
        sa.resize(a1.len(), 0);
    }
    add_into(f, &mut sa, a1);
    let mut sb = b0.to_vec();
    if sb.len() < b1.len() {
        sb.resize(b1.len(), 0);
    }
    add_into(f, &mut sb, b1);
    let mut z1 = karatsuba(f, &sa, &sb);
    for (i, &x) in z0.iter().enumerate() {
        z1[i] = f.sub(z1[i], x);
    }
    for (i, &x) in z2.iter().enumerate() {
        z1[i] = f.sub(z1[i], x);
    }
    let mut c = vec![0; a.len() + b.len() - 1];
    add_into(f, &mut c, &z0);
    add_into(f, &mut c[m..], &z1);
    add_into(f, &mut c[2 * m..], &z2);
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, d: u32) -> Fq {
        Fq::new(p, d).unwrap()
    }

    #[test]
    fn text_roundtrip() {
        let f3 = f(3, 1);
        let a = UPoly::parse(&f3, "T^2+2*T+1", "T").unwrap();
        assert_eq!(a.to_text("T"), "T^2+2*T+1");
        assert_eq!(UPoly::parse(&f3, "T^2-T+1", "T").unwrap().to_text("T"), "T^2+2*T+1");
        let f4 = f(2, 2);
        let b = UPoly::parse(&f4, "g^2*T^3+T+g", "T").unwrap();
        assert_eq!(b.to_text("T"), "g^2*T^3+T+g^1");
    }

    #[test]
    fn twist_of_theta_plus_one() {
        let f2 = f(2, 1);
        let a = UPoly::parse(&f2, "T+1", "T").unwrap();
        assert_eq!(a.twist(1).to_text("T"), "T^2+1");
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let f3 = f(3, 1);
        let a: Vec<Elem> = (0..200u32).map(|i| (i * 7 + 1) % 3).collect();
        let b: Vec<Elem> = (0..150u32).map(|i| (i * i + 2) % 3).collect();
        assert_eq!(karatsuba(&f3, &a, &b), schoolbook(&f3, &a, &b));
        let f4 = f(2, 2);
        let a: Vec<Elem> = (0..130u32).map(|i| (i * 5 + 3) % 4).collect();
        let b: Vec<Elem> = (0..97u32).map(|i| (i * i + 1) % 4).collect();
        assert_eq!(karatsuba(&f4, &a, &b), schoolbook(&f4, &a, &b));
    }

    #[test]
    fn binomial_division() {
        let f3 = f(3, 1);
        let x = UPoly::parse(&f3, "T^5+2*T^2+1", "T").unwrap();
        let y = x.mul_binomial(9, 1);
        assert_eq!(y.div_binomial(9, 1).unwrap(), x);
        assert!(x.div_binomial(3, 1).is_none());
    }

    #[test]
    fn irreducibility_counts() {
        // Number of monic irreducibles of degree d over F_q (necklace formula).
        let f2 = f(2, 1);
        let counts: Vec<usize> = (1..=6).map(|d| UPoly::irreducibles(&f2, d).len()).collect();
        assert_eq!(counts, vec![2, 1, 2, 3, 6, 9]);
        let f3 = f(3, 1);
        let counts: Vec<usize> = (1..=4).map(|d| UPoly::irreducibles(&f3, d).len()).collect();
        assert_eq!(counts, vec![3, 3, 8, 18]);
    }

    #[test]
    fn factorization_roundtrip() {
        let f3 = f(3, 1);
        for a in UPoly::monics(&f3, 4) {
            let prod = a
                .factor_monic()
                .iter()
                .fold(UPoly::one(&f3), |acc, (p, k)| acc.mul(&p.pow(*k as u64)));
            assert_eq!(prod, a);
        }
    }
}
