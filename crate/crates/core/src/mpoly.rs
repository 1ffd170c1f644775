//! Sparse multivariate polynomials with coefficients in a [`Ring`].

use crate::ratfn::RatFn;
use crate::ring::{KAlgebra, Ring};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector → nonzero coefficient.
///
/// `frob_vars` selects how the twist acts: when set, `τ` raises the variables to
/// the q-th power too (the q-power map of `E[X_1..X_n]`); otherwise only
/// coefficients are twisted (the variables `t_j` of the shtuka setting).
#[derive(Clone)]
pub struct MPoly<C: Ring> {
    nvars: usize,
    frob_vars: bool,
    proto: C,
    terms: BTreeMap<Vec<u64>, C>,
}

impl<C: Ring> PartialEq for MPoly<C> {
    fn eq(&self, o: &Self) -> bool {
        self.nvars == o.nvars && self.terms == o.terms
    }
}

impl<C: Ring> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.to_text(&names, |c| format!("{c:?}")))
    }
}

impl<C: Ring> MPoly<C> {
    pub fn zero(nvars: usize, frob_vars: bool, proto: &C) -> Self {
        MPoly { nvars, frob_vars, proto: proto.zero_like(), terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, frob_vars: bool, c: C) -> Self {
        let mut m = MPoly::zero(nvars, frob_vars, &c);
        if !c.is_zero() {
            m.terms.insert(vec![0; nvars], c);
        }
        m
    }

    pub fn var(nvars: usize, frob_vars: bool, i: usize, proto: &C) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly::monomial(nvars, frob_vars, e, proto.one_like())
    }

    pub fn monomial(nvars: usize, frob_vars: bool, exps: Vec<u64>, c: C) -> Self {
        let mut m = MPoly::zero(nvars, frob_vars, &c);
        if !c.is_zero() {
            m.terms.insert(exps, c);
        }
        m
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn frob_vars(&self) -> bool {
        self.frob_vars
    }

    pub fn proto(&self) -> &C {
        &self.proto
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u64>, C> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u64]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(|| self.proto.clone())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<u64>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = x.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn map_coeffs(&self, g: impl Fn(&C) -> C) -> Self {
        let mut out = MPoly::zero(self.nvars, self.frob_vars, &self.proto);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), g(c));
        }
        out
    }

    pub fn scale_by(&self, c: &C) -> Self {
        self.map_coeffs(|x| x.mul(c))
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u64 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut r = self.one_like();
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Substitute `vals[i]` for variable i.
    pub fn eval(&self, vals: &[C]) -> C {
        let mut acc = self.proto.clone();
        let mut cache: BTreeMap<(usize, u64), C> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = cache.entry((i, k)).or_insert_with(|| ring_pow(&vals[i], k)).clone();
                t = t.mul(&pw);
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn to_text(&self, names: &[String], coef: impl Fn(&C) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            let cs = coef(c);
            let cs = if cs.contains('+') && !(cs.starts_with('(') && cs.ends_with(')')) {
                format!("({cs})")
            } else {
                cs
            };
            if mono.is_empty() {
                parts.push(cs);
            } else if c == &self.proto.one_like() {
                parts.push(mono.join("*"));
            } else {
                parts.push(format!("{}*{}", cs, mono.join("*")));
            }
        }
        parts.join("+")
    }
}

pub fn ring_pow<C: Ring>(x: &C, mut k: u64) -> C {
    let mut r = x.one_like();
    let mut b = x.clone();
    while k > 0 {
        if k & 1 == 1 {
            r = r.mul(&b);
        }
        k >>= 1;
        if k > 0 {
            b = b.mul(&b);
        }
    }
    r
}

impl<C: Ring> Ring for MPoly<C> {
    fn q(&self) -> u64 {
        self.proto.q()
    }
    fn zero_like(&self) -> Self {
        MPoly::zero(self.nvars, self.frob_vars, &self.proto)
    }
    fn one_like(&self) -> Self {
        MPoly::constant(self.nvars, self.frob_vars, self.proto.one_like())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }
    fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let mut r = self.zero_like();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1.mul(c2));
            }
        }
        r
    }
    fn twist(&self, i: u32) -> Self {
        if i == 0 {
            return self.clone();
        }
        let mut r = self.zero_like();
        let s = if self.frob_vars { self.proto.q().pow(i) } else { 1 };
        for (e, c) in &self.terms {
            r.add_term(e.iter().map(|&k| k * s).collect(), c.twist(i));
        }
        r
    }
}

impl<C: KAlgebra> KAlgebra for MPoly<C> {
    fn scale(&self, c: &RatFn) -> Self {
        self.map_coeffs(|x| x.scale(c))
    }
    fn from_k(&self, c: &RatFn) -> Self {
        MPoly::constant(self.nvars, self.frob_vars, self.proto.from_k(c))
    }
}
