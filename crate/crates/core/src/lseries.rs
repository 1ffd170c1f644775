//! Degree-stratified sums over monic polynomials: equivariant L-series, zeta
//! polynomials at negative integers, Pellarin series and Euler products.
//!
//! A stratum `Σ_{deg a = d} w(a)/a^n` is assembled from the moments
//! `Σ_a a_{i_1}⋯a_{i_k}/a^n` (grouped by Frobenius symbol): `φ_a` and `a(t)` are
//! F_q-linear in the coefficients of `a`, so a payload of degree k in its
//! variables only needs moments of order ≤ k. Every `1/a^n` is written over the
//! common denominator `ℓ_d^n`.

use crate::cyclotomic::{CycElem, CycField};
use crate::error::{Error, Result};
use crate::field::{Elem, Fq};
use crate::laurent::LaurentApprox;
use crate::mpoly::MPoly;
use crate::ratfn::{ell, RatFn};
use crate::ring::{KAlgebra, Ring};
use crate::upoly::{split_terms, UPoly};
use rayon::prelude::*;
use std::collections::HashMap;

/// Default cap on the number of monic polynomials enumerated per stratum.
pub const DEFAULT_MAX_ENUM: u64 = 1 << 20;

/// Enumeration cap, overridable through `CARLITZ_LAB_MAX_ENUM`.
pub fn max_enum() -> u64 {
    std::env::var("CARLITZ_LAB_MAX_ENUM").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_MAX_ENUM)
}

fn check_enum(f: &Fq, d: usize) -> Result<u64> {
    let count = (f.q() as u64).checked_pow(d as u32).unwrap_or(u64::MAX);
    let limit = max_enum();
    if count > limit {
        return Err(Error::EnumerationLimit { count, limit });
    }
    Ok(count)
}

/// Sorted index multisets over `0..d` of size at most `k`.
fn multisets(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for m in &frontier {
            let start = m.last().copied().unwrap_or(0);
            for i in start..d {
                let mut x: Vec<usize> = m.clone();
                x.push(i);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// `Σ_{a monic, deg a = d, key(a) = κ} a_{i_1}⋯a_{i_k} / a^n` for every symbol key κ
/// and every multiset `{i_1, …, i_k}` of indices below d.
#[derive(Clone, Debug)]
pub struct Moments {
    pub d: usize,
    pub n: u64,
    pub tuples: Vec<Vec<usize>>,
    /// `values[key][tuple]`.
    pub values: Vec<Vec<RatFn>>,
}

impl Moments {
    pub fn compute(cf: &CycField, d: usize, n: u64, order: usize) -> Result<Moments> {
        let f = cf.field();
        let count = check_enum(f, d)?;
        let tuples = multisets(d, order);
        let nkeys = cf.symbol_key_count();
        let l = ell(f, d);
        let width = (l.deg() as usize) * n as usize + 1;
        let chunks = (rayon::current_num_threads() * 4).clamp(1, count as usize);
        let per = count.div_ceil(chunks as u64);
        let partial: Vec<Vec<Vec<UPoly>>> = (0..chunks as u64)
            .into_par_iter()
            .map(|c| {
                let mut acc = vec![vec![UPoly::zero(f); tuples.len()]; nkeys];
                let mut dense = vec![vec![vec![0 as Elem; width]; tuples.len()]; nkeys];
                for idx in c * per..((c + 1) * per).min(count) {
                    let a = UPoly::monic_from_index(f, d, idx);
                    let r = l.exact_div(&a).expect("monic of degree d divides ell_d");
                    let r = if n == 1 { r } else { r.pow(n) };
                    let key = cf.symbol_key(&a);
                    for (t, tup) in tuples.iter().enumerate() {
                        let w = tup.iter().fold(1 as Elem, |w, &i| f.mul(w, a.coeff(i)));
                        if w == 0 {
                            continue;
                        }
                        let slot = &mut dense[key][t];
                        for (k, &rk) in r.coeffs().iter().enumerate() {
                            if rk != 0 {
                                slot[k] = f.add(slot[k], f.mul(w, rk));
                            }
                        }
                    }
                }
                for (key, row) in dense.into_iter().enumerate() {
                    for (t, v) in row.into_iter().enumerate() {
                        acc[key][t] = UPoly::from_coeffs(f, v);
                    }
                }
                acc
            })
            .collect();
        let mut total = vec![vec![UPoly::zero(f); tuples.len()]; nkeys];
        for part in partial {
            for (key, row) in part.into_iter().enumerate() {
                for (t, v) in row.into_iter().enumerate() {
                    total[key][t].add_assign(&v);
                }
            }
        }
        let values = total
            .into_iter()
            .map(|row| row.into_iter().map(|v| RatFn::over_ell(v, d, n).tidy()).collect())
            .collect();
        Ok(Moments { d, n, tuples, values })
    }

    fn tuple_index(&self) -> HashMap<Vec<usize>, usize> {
        self.tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect()
    }

    /// Moments regrouped by group element: `Σ_κ σ_κ[g] · values[κ]`.
    pub fn by_group(&self, cf: &CycField) -> Vec<Vec<RatFn>> {
        let f = cf.field();
        let zero = RatFn::zero(f);
        let mut out = vec![vec![zero; self.tuples.len()]; cf.group_order()];
        for (key, row) in self.values.iter().enumerate() {
            if row.iter().all(|x| x.is_zero()) {
                continue;
            }
            let sym = cf.symbol_of_key(key);
            for (g, &c) in sym.coeffs().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (t, v) in row.iter().enumerate() {
                    out[g][t] = out[g][t].add(&v.scale_elem(c));
                }
            }
        }
        out
    }
}

/// `Σ_{deg a = d} σ_a / a^n` as a group-ring element with coefficients in K.
pub fn group_stratum(cf: &CycField, n: u64, d: usize) -> Result<Vec<RatFn>> {
    let m = Moments::compute(cf, d, n, 0)?;
    Ok(m.by_group(cf).into_iter().map(|mut row| row.remove(0)).collect())
}

/// Group-ring strata `0..=D` of `L(φ/O_E; n; z)`.
pub fn group_zseries(cf: &CycField, n: u64, dmax: usize) -> Result<Vec<Vec<RatFn>>> {
    (0..=dmax).map(|d| group_stratum(cf, n, d)).collect()
}

/// `φ_{θ^i}(X_v)` as an additive polynomial.
fn phi_power_var(cf: &CycField, nvars: usize, i: usize, v: usize) -> MPoly<CycElem> {
    let f = cf.field();
    let q = f.q() as u64;
    let coeffs = cf.module().phi_of_poly(&UPoly::monomial(f, 1, i));
    let zero = cf.zero();
    let mut out = MPoly::zero(nvars, true, &zero);
    for (k, c) in coeffs.into_iter().enumerate() {
        let mut e = vec![0u64; nvars];
        e[v] = q.pow(k as u32);
        out.add_term(e, cf.from_k(&RatFn::from_poly(c)));
    }
    out
}

/// `Σ_{deg I = d} (I * f) / ψ(I)^n`, with `I * f` acting by `σ_I` on coefficients and
/// `X_v ↦ φ_I(X_v)` on variables.
pub fn stratum_sum(cf: &CycField, n: u64, d: usize, payload: &MPoly<CycElem>) -> Result<MPoly<CycElem>> {
    let nvars = payload.nvars();
    let order = payload.total_degree() as usize;
    let zero = cf.zero();
    let mut out = MPoly::zero(nvars, true, &zero);
    if payload.is_empty() {
        return Ok(out);
    }
    let m = Moments::compute(cf, d, n, order)?;
    let tindex = m.tuple_index();
    let groups = m.by_group(cf);
    let phis: Vec<Vec<MPoly<CycElem>>> =
        (0..=d).map(|i| (0..nvars).map(|v| phi_power_var(cf, nvars, i, v)).collect()).collect();
    for (g, w) in groups.iter().enumerate() {
        if w.iter().all(|x| x.is_zero()) {
            continue;
        }
        for (e, c) in payload.terms() {
            let c = if cf.is_trivial() { c.clone() } else { cf.galois_act(g, c)? };
            let slots: Vec<usize> = e.iter().enumerate().flat_map(|(v, &k)| std::iter::repeat_n(v, k as usize)).collect();
            let combos = (d + 1).pow(slots.len() as u32);
            for mut code in 0..combos {
                let mut prod = MPoly::constant(nvars, true, c.clone());
                let mut tup = Vec::new();
                for &v in &slots {
                    let i = code % (d + 1);
                    code /= d + 1;
                    if i < d {
                        tup.push(i);
                    }
                    prod = prod.mul(&phis[i][v]);
                }
                tup.sort_unstable();
                let wt = &w[tindex[&tup]];
                if wt.is_zero() {
                    continue;
                }
                out = out.add(&prod.scale(wt));
            }
        }
    }
    Ok(out.map_coeffs(|x| x.tidy()))
}

/// Strata `S_0, …, S_D` of `L(φ/O_E; n; z)` applied to a payload.
#[derive(Clone, Debug)]
pub struct EquivariantZSeries {
    pub n: u64,
    pub strata: Vec<MPoly<CycElem>>,
}

impl EquivariantZSeries {
    pub fn compute(cf: &CycField, n: u64, dmax: usize, payload: &MPoly<CycElem>) -> Result<EquivariantZSeries> {
        let strata = (0..=dmax).map(|d| stratum_sum(cf, n, d, payload)).collect::<Result<_>>()?;
        Ok(EquivariantZSeries { n, strata })
    }

    pub fn degree(&self) -> usize {
        self.strata.len().saturating_sub(1)
    }
}

/// `zseries` with the strata computed lazily and cached.
pub struct LazySeries<'a> {
    cf: &'a CycField,
    n: u64,
    payload: &'a MPoly<CycElem>,
    strata: Vec<MPoly<CycElem>>,
}

impl<'a> LazySeries<'a> {
    pub fn new(cf: &'a CycField, n: u64, payload: &'a MPoly<CycElem>) -> LazySeries<'a> {
        LazySeries { cf, n, payload, strata: Vec::new() }
    }

    pub fn stratum(&mut self, d: usize) -> Result<&MPoly<CycElem>> {
        while self.strata.len() <= d {
            let s = stratum_sum(self.cf, self.n, self.strata.len(), self.payload)?;
            self.strata.push(s);
        }
        Ok(&self.strata[d])
    }

    pub fn computed(&self) -> &[MPoly<CycElem>] {
        &self.strata
    }
}

/// `L(φ/A; −n; z) = Σ_d z^d Σ_{deg a = d} a^n`, strata until a vanishing window.
#[derive(Clone, Debug, PartialEq)]
pub struct NegZeta {
    pub n: u64,
    pub coeffs: Vec<UPoly>,
    /// Last degree with a nonzero stratum.
    pub d0: usize,
    pub window_found: bool,
    pub strata_computed: usize,
}

impl NegZeta {
    pub fn to_text(&self) -> String {
        poly_z_text(&self.coeffs.iter().cloned().map(RatFn::from_poly).collect::<Vec<_>>())
    }
}

pub fn negative_n_stratum(f: &Fq, n: u64, d: usize) -> Result<UPoly> {
    let count = check_enum(f, d)?;
    let chunks = (rayon::current_num_threads() * 4).clamp(1, count as usize) as u64;
    let per = count.div_ceil(chunks);
    let parts: Vec<UPoly> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = UPoly::zero(f);
            for idx in c * per..((c + 1) * per).min(count) {
                acc.add_assign(&UPoly::monic_from_index(f, d, idx).pow(n));
            }
            acc
        })
        .collect();
    Ok(parts.into_iter().fold(UPoly::zero(f), |a, b| a.add(&b)))
}

/// Strata until `w` consecutive zero strata follow the last nonzero one, capped at degree `cap`.
pub fn negative_n_polynomial(f: &Fq, n: u64, w: usize, cap: usize) -> Result<NegZeta> {
    let mut coeffs = Vec::new();
    let mut d0 = 0;
    let mut zeros = 0;
    let mut found = false;
    for d in 0..=cap {
        let s = negative_n_stratum(f, n, d)?;
        if s.is_zero() {
            zeros += 1;
        } else {
            d0 = d;
            zeros = 0;
        }
        coeffs.push(s);
        if zeros >= w {
            found = true;
            break;
        }
    }
    let computed = coeffs.len();
    coeffs.truncate(d0 + 1);
    Ok(NegZeta { n, coeffs, d0, window_found: found, strata_computed: computed })
}

/// Stratum `Σ_{deg a = d} a(t_1)⋯a(t_s)/a` in `K[t_1, …, t_s]`.
pub fn pellarin_stratum(f: &Fq, s: usize, d: usize) -> Result<MPoly<RatFn>> {
    let cf = CycField::trivial(f);
    let m = Moments::compute(&cf, d, 1, s)?;
    let tindex = m.tuple_index();
    let vals = &m.values[0];
    let zero = RatFn::zero(f);
    let mut out = MPoly::zero(s, false, &zero);
    let combos = (d + 1).pow(s as u32);
    for mut code in 0..combos {
        let mut e = Vec::with_capacity(s);
        let mut tup = Vec::new();
        for _ in 0..s {
            let i = code % (d + 1);
            code /= d + 1;
            e.push(i as u64);
            if i < d {
                tup.push(i);
            }
        }
        tup.sort_unstable();
        out.add_term(e, vals[tindex[&tup]].clone());
    }
    Ok(out)
}

/// Strata `0..=D` of `L(φ_s; 1; z)`.
pub fn pellarin_series(f: &Fq, s: usize, dmax: usize) -> Result<Vec<MPoly<RatFn>>> {
    (0..=dmax).map(|d| pellarin_stratum(f, s, d)).collect()
}

/// Truncated product `Π (1 − c z^k)^{−g}` updated in place on `z`-coefficients `0..=D`.
fn mul_inverse_factor(series: &mut [RatFn], c: &RatFn, k: usize, g: usize) {
    for _ in 0..g {
        for d in k..series.len() {
            let t = series[d - k].mul(c);
            series[d] = series[d].add(&t);
        }
    }
}

/// `1/Q^n` written over `B_{deg Q}^n`.
fn inv_irreducible_pow(q: &UPoly, n: u64) -> RatFn {
    let f = q.field();
    let k = q.deg() as usize;
    let b = UPoly::binomial(f, (f.q() as usize).pow(k as u32), 1);
    let num = b.exact_div(q).expect("irreducible of degree k divides B_k").pow(n);
    let mut bv = vec![0; k];
    bv[k - 1] = n;
    RatFn::over_b(num, bv)
}

/// `Π_Q Π_{𝔓 | Q} (1 − z^{f deg Q} / (Q^f)^n)^{−1}` to `z^D`.
pub fn euler_product_zeta(cf: &CycField, n: u64, dmax: usize) -> Result<Vec<RatFn>> {
    let f = cf.field();
    let mut series = vec![RatFn::zero(f); dmax + 1];
    series[0] = RatFn::one(f);
    for k in 1..=dmax {
        check_enum(f, k)?;
        for q in UPoly::irreducibles(f, k) {
            let s = cf.prime_splitting(&q)?;
            let zdeg = s.f * k;
            if zdeg > dmax {
                continue;
            }
            let c = inv_irreducible_pow(&q, n).pow(s.f as u64);
            mul_inverse_factor(&mut series, &c, zdeg, s.g);
        }
    }
    Ok(series.into_iter().map(|x| x.tidy()).collect())
}

fn binom_mod_p(n: u64, k: u64, p: u64) -> u64 {
    // Lucas' theorem.
    let (mut n, mut k) = (n, k);
    let mut r = 1u64;
    while n > 0 || k > 0 {
        let (a, b) = (n % p, k % p);
        if b > a {
            return 0;
        }
        let mut c = 1u64;
        for i in 0..b {
            c = c * ((a - i) % p) % p;
        }
        let mut den = 1u64;
        for i in 1..=b {
            den = den * (i % p) % p;
        }
        let mut inv = 1u64;
        let mut base = den;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                inv = inv * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        r = r * c % p * inv % p;
        n /= p;
        k /= p;
    }
    r
}

/// Number of ideals of `O_E` of norm `a` (mod p), from the factorization of `a`.
pub struct IdealCounter {
    cf: CycField,
    irreducibles: Vec<UPoly>,
    splitting: HashMap<Vec<Elem>, (usize, usize)>,
}

impl IdealCounter {
    pub fn new(cf: &CycField, dmax: usize) -> Result<IdealCounter> {
        let f = cf.field();
        let mut splitting = HashMap::new();
        let mut irreducibles = Vec::new();
        for k in 1..=dmax {
            for q in UPoly::irreducibles(f, k) {
                let s = cf.prime_splitting(&q)?;
                splitting.insert(q.coeffs().to_vec(), (s.f, s.g));
                if 2 * k <= dmax {
                    irreducibles.push(q);
                }
            }
        }
        Ok(IdealCounter { cf: cf.clone(), irreducibles, splitting })
    }

    pub fn count(&self, a: &UPoly) -> Elem {
        let f = self.cf.field();
        let p = f.p() as u64;
        let mut rest = a.clone();
        let mut r = 1u64;
        let mut factors: Vec<(UPoly, u64)> = Vec::new();
        for q in &self.irreducibles {
            if 2 * q.deg() > rest.deg() {
                break;
            }
            let mut k = 0;
            while let Some(t) = rest.exact_div(q) {
                rest = t;
                k += 1;
            }
            if k > 0 {
                factors.push((q.clone(), k));
            }
        }
        if rest.deg() > 0 {
            factors.push((rest, 1));
        }
        for (q, k) in factors {
            let (fq, g) = self.splitting[q.coeffs()];
            if k % fq as u64 != 0 {
                return 0;
            }
            let m = k / fq as u64;
            r = r * binom_mod_p(m + g as u64 - 1, g as u64 - 1, p) % p;
        }
        f.from_int(r as i64)
    }
}

/// `Σ_{a monic} r_E(a) z^{deg a} / a^n` to `z^D`, with `r_E(a)` the number of ideals of norm `a`.
pub fn dirichlet_zeta(cf: &CycField, n: u64, dmax: usize) -> Result<Vec<RatFn>> {
    let f = cf.field();
    let counter = IdealCounter::new(cf, dmax)?;
    let mut out = Vec::with_capacity(dmax + 1);
    for d in 0..=dmax {
        let count = check_enum(f, d)?;
        let l = ell(f, d);
        let chunks = (rayon::current_num_threads() * 4).clamp(1, count as usize) as u64;
        let per = count.div_ceil(chunks);
        let parts: Vec<UPoly> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = UPoly::zero(f);
                for idx in c * per..((c + 1) * per).min(count) {
                    let a = UPoly::monic_from_index(f, d, idx);
                    let r = counter.count(&a);
                    if r != 0 {
                        let t = l.exact_div(&a).expect("divides ell_d").pow(n);
                        acc.add_scaled_assign(r, &t);
                    }
                }
                acc
            })
            .collect();
        let num = parts.into_iter().fold(UPoly::zero(f), |a, b| a.add(&b));
        out.push(RatFn::over_ell(num, d, n).tidy());
    }
    Ok(out)
}

/// `Σ_d S_d` in `K_∞` to precision `prec`, certified by `w` consecutive strata of valuation ≥ prec
/// beyond the cutoff.
#[derive(Clone, Debug)]
pub struct Z1Value {
    pub value: LaurentApprox,
    pub cutoff: usize,
    pub strata_valuations: Vec<Option<i64>>,
}

pub fn eval_z1(mut stratum: impl FnMut(usize) -> Result<RatFn>, prec: i64, w: usize, max_d: usize) -> Result<Z1Value> {
    let mut vals = Vec::new();
    let mut strata = Vec::new();
    let mut run = 0;
    for d in 0..=max_d {
        let s = stratum(d)?;
        let v = s.v_inf();
        vals.push(v);
        strata.push(s);
        if v.is_none_or(|v| v >= prec) {
            run += 1;
        } else {
            run = 0;
        }
        if run >= w {
            let cutoff = d + 1 - w;
            let f = strata[0].field().clone();
            let mut acc = LaurentApprox::zero(&f, prec);
            for s in &strata[..cutoff] {
                acc = acc.add(&LaurentApprox::from_ratfn(s, prec));
            }
            return Ok(Z1Value { value: acc, cutoff, strata_valuations: vals });
        }
    }
    Err(Error::PrecisionUnreachable(prec))
}

/// `c_0 + c_1 z + …` in canonical text.
pub fn poly_z_text(c: &[RatFn]) -> String {
    let mut parts = Vec::new();
    for (d, x) in c.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let (num, den) = x.reduced();
        let s = if den.is_one() { num.to_text("T") } else { format!("({})/({})", num.to_text("T"), den.to_text("T")) };
        let s = if d > 0 && num.nnz() > 1 && den.is_one() { format!("({s})") } else { s };
        parts.push(match (d, x.is_one()) {
            (0, _) => s,
            (1, true) => "z".into(),
            (_, true) => format!("z^{d}"),
            (1, false) => format!("{s}*z"),
            (_, false) => format!("{s}*z^{d}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Parses a payload in `O_E[X_1, …, X_n]`: sums of products of constants, `T`, `L`/`Lj` and `X`/`Xj`
/// with optional `^k`.
pub fn parse_payload(cf: &CycField, nvars: usize, s: &str) -> Result<MPoly<CycElem>> {
    let f = cf.field();
    let zero = cf.zero();
    let mut out = MPoly::zero(nvars, true, &zero);
    let nl = cf.primes().len();
    for (neg, term) in split_terms(s)? {
        let mut coef = cf.one();
        let mut exps = vec![0u64; nvars];
        for factor in term.split('*') {
            let bad = || Error::Parse(factor.to_string());
            if factor.starts_with('g') || factor.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                coef = coef.scale(&RatFn::constant(f, f.parse_elem(factor)?));
                continue;
            }
            let (name, k) = match factor.split_once('^') {
                Some((n, k)) => (n, k.parse::<u64>().map_err(|_| bad())?),
                None => (factor, 1),
            };
            let index = |prefix: &str, count: usize| -> Result<usize> {
                let rest = &name[prefix.len()..];
                let j = if rest.is_empty() && count == 1 { 0 } else { rest.parse::<usize>().map_err(|_| bad())?.wrapping_sub(1) };
                if j >= count {
                    return Err(bad());
                }
                Ok(j)
            };
            if name == "T" {
                coef = coef.scale(&RatFn::from_poly(UPoly::monomial(f, 1, k as usize)));
            } else if name.starts_with('L') {
                let j = index("L", nl)?;
                coef = coef.mul(&crate::mpoly::ring_pow(&cf.lambda(j), k));
            } else if name.starts_with('X') {
                let j = index("X", nvars)?;
                exps[j] += k;
            } else {
                return Err(bad());
            }
        }
        if neg {
            coef = coef.neg();
        }
        out.add_term(exps, coef);
    }
    Ok(out)
}

/// Text of a payload-shaped polynomial.
pub fn payload_text(x: &MPoly<CycElem>) -> String {
    let names: Vec<String> =
        if x.nvars() == 1 { vec!["X".into()] } else { (1..=x.nvars()).map(|i| format!("X{i}")).collect() };
    x.to_text(&names, |c| c.to_text())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(f: &Fq, s: &str) -> UPoly {
        UPoly::parse(f, s, "T").unwrap()
    }

    fn rf(f: &Fq, s: &str) -> RatFn {
        RatFn::parse(f, s, "T").unwrap()
    }

    #[test]
    fn first_strata() {
        let f2 = Fq::new(2, 1).unwrap();
        let k2 = CycField::trivial(&f2);
        let one = parse_payload(&k2, 0, "1").unwrap();
        let s1 = stratum_sum(&k2, 1, 1, &one).unwrap();
        assert_eq!(s1.coeff(&[]).as_k().unwrap(), &rf(&f2, "1/(T^2+T)"));
        let s0 = stratum_sum(&k2, 1, 0, &one).unwrap();
        assert_eq!(s0, one);
        let f3 = Fq::new(3, 1).unwrap();
        let k3 = CycField::trivial(&f3);
        let one3 = parse_payload(&k3, 0, "1").unwrap();
        let s = stratum_sum(&k3, 1, 1, &one3).unwrap();
        assert_eq!(s.coeff(&[]).as_k().unwrap(), &rf(&f3, "2/(T^3+2*T)"));
    }

    #[test]
    fn lambda_stratum_uses_averaged_symbol() {
        let f3 = Fq::new(3, 1).unwrap();
        let e = CycField::new(&f3, &[up(&f3, "T")]).unwrap();
        let b = parse_payload(&e, 0, "L").unwrap();
        let s = stratum_sum(&e, 1, 1, &b).unwrap();
        let expect = e.lambda(0).scale(&rf(&f3, "1/(T^2+2)"));
        assert_eq!(s.coeff(&[]), expect);
    }

    #[test]
    fn one_variable_stratum() {
        // Σ_{deg a = 1} φ_a(X)/a = X Σ 1 + X^q Σ 1/a.
        let f2 = Fq::new(2, 1).unwrap();
        let k = CycField::trivial(&f2);
        let x = parse_payload(&k, 1, "X").unwrap();
        let s = stratum_sum(&k, 1, 1, &x).unwrap();
        assert!(s.coeff(&[1]).is_zero());
        assert_eq!(s.coeff(&[2]).as_k().unwrap(), &rf(&f2, "1/(T^2+T)"));
        let s0 = stratum_sum(&k, 1, 0, &x).unwrap();
        assert_eq!(s0, x);
    }

    #[test]
    fn negative_n_examples() {
        let f2 = Fq::new(2, 1).unwrap();
        let z = negative_n_polynomial(&f2, 1, 3, 8).unwrap();
        assert_eq!(z.to_text(), "1+z");
        for p in [2u64, 3] {
            let f = Fq::new(p, 1).unwrap();
            let z0 = negative_n_polynomial(&f, 0, 3, 4).unwrap();
            assert_eq!(z0.to_text(), "1");
            assert!(z0.window_found);
        }
    }

    #[test]
    fn pellarin_first_stratum() {
        let f2 = Fq::new(2, 1).unwrap();
        let s = pellarin_stratum(&f2, 1, 1).unwrap();
        assert_eq!(s.coeff(&[1]), rf(&f2, "1/(T^2+T)"));
        assert_eq!(s.coeff(&[0]), rf(&f2, "T/(T^2+T)"));
        assert!(pellarin_stratum(&f2, 2, 0).unwrap().coeff(&[0, 0]).is_one());
        let z = pellarin_stratum(&f2, 0, 3).unwrap();
        let k = CycField::trivial(&f2);
        assert_eq!(z.coeff(&[]), group_stratum(&k, 1, 3).unwrap()[0]);
    }

    #[test]
    fn euler_matches_dirichlet_small() {
        let f2 = Fq::new(2, 1).unwrap();
        let k = CycField::trivial(&f2);
        let e = euler_product_zeta(&k, 1, 1).unwrap();
        assert_eq!(poly_z_text(&e), "1+(1)/(T^2+T)*z");
        let f3 = Fq::new(3, 1).unwrap();
        let e3 = CycField::new(&f3, &[up(&f3, "T")]).unwrap();
        assert_eq!(euler_product_zeta(&e3, 1, 3).unwrap(), dirichlet_zeta(&e3, 1, 3).unwrap());
    }

    #[test]
    fn z1_evaluation() {
        let f2 = Fq::new(2, 1).unwrap();
        let k = CycField::trivial(&f2);
        let v = eval_z1(|d| Ok(group_stratum(&k, 1, d)?[0].clone()), 3, 2, 10).unwrap();
        assert_eq!(v.value.to_text(), "1+u^2+O(u^3)");
    }

    #[test]
    fn payload_parsing() {
        let f3 = Fq::new(3, 1).unwrap();
        let e = CycField::new(&f3, &[up(&f3, "T")]).unwrap();
        let p = parse_payload(&e, 1, "L+T*X^2-2").unwrap();
        assert_eq!(payload_text(&p), "T*X^2+(L+1)");
        assert!(parse_payload(&e, 0, "X").is_err());
        assert!(parse_payload(&e, 0, "").is_err());
    }
}
