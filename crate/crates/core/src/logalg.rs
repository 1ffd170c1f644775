//! z-graded application of the deformed exponential to equivariant series:
//! special polynomials, Stark units, torsion specialization and the class-formula report.

use crate::cyclotomic::{CycElem, CycField};
use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::field::Fq;
use crate::laurent::LaurentApprox;
use crate::lseries::{dirichlet_zeta, euler_product_zeta, eval_z1, poly_z_text, LazySeries, Z1Value};
use crate::mpoly::{ring_pow, MPoly};
use crate::ratfn::RatFn;
use crate::residue::ResidueField;
use crate::ring::{KAlgebra, Ring};
use crate::upoly::UPoly;

/// Default window of consecutive vanishing coefficients.
pub const DEFAULT_WINDOW: usize = 3;

/// `2·(q·(payload degree) + q + 4)`.
pub fn default_max_z(q: u64, payload_degree: u64) -> usize {
    (2 * (q * payload_degree + q + 4)) as usize
}

/// `g_m = Σ_{i+d=m} e_i · τ^i(S_d)`.
pub fn exp_tilde_coeff<T: KAlgebra>(exp: &[RatFn], strata: &[T], m: usize) -> Result<T> {
    if strata.len() <= m || exp.len() <= m {
        return Err(Error::InsufficientStrata { need: m + 1, have: strata.len().min(exp.len()) });
    }
    let mut acc = strata[0].zero_like();
    for i in 0..=m {
        let s = &strata[m - i];
        if s.is_zero() {
            continue;
        }
        acc = acc.add(&s.twist(i as u32).scale(&exp[i]));
    }
    Ok(acc)
}

/// `g_0, …, g_M` for the given strata.
pub fn exp_tilde_apply<T: KAlgebra>(dm: &DrinfeldModule, strata: &[T], m: usize) -> Result<Vec<T>> {
    let e = dm.exp_coeffs(m);
    (0..=m).map(|k| exp_tilde_coeff(&e, strata, k)).collect()
}

fn tidy_payload(x: &MPoly<CycElem>) -> MPoly<CycElem> {
    x.map_coeffs(|c| c.tidy())
}

fn payload_integral(x: &MPoly<CycElem>) -> bool {
    x.terms().values().all(|c| c.is_integral())
}

/// The coefficients `g_m` of `exp_φ̃(L(φ/O_E; 1; z)(f))` with verdicts.
#[derive(Clone, Debug)]
pub struct SpecialPoly {
    pub g: Vec<MPoly<CycElem>>,
    pub integral: Vec<bool>,
    /// Least m with `g_m = … = g_{m+W−1} = 0` among the computed coefficients.
    pub m0: Option<usize>,
    pub window: usize,
    pub max_z: usize,
}

impl SpecialPoly {
    pub fn all_integral(&self) -> bool {
        self.integral.iter().all(|&b| b)
    }

    /// The coefficients below the stabilization index.
    pub fn polynomial(&self) -> &[MPoly<CycElem>] {
        &self.g[..self.m0.unwrap_or(self.g.len())]
    }

    /// `Σ_m g_m`, the value at z = 1.
    pub fn value_at_one(&self) -> MPoly<CycElem> {
        let mut acc = self.g[0].zero_like();
        for x in self.polynomial() {
            acc = acc.add(x);
        }
        tidy_payload(&acc)
    }
}

/// Coefficients `g_0, g_1, …` until `W` consecutive zeros or `M`. With `full`, all of `g_0..g_M`.
pub fn special_polynomial(cf: &CycField, payload: &MPoly<CycElem>, max_z: usize, window: usize, full: bool) -> Result<SpecialPoly> {
    let dm = cf.module();
    let e = dm.exp_coeffs(max_z);
    let mut lazy = LazySeries::new(cf, 1, payload);
    let mut g = Vec::new();
    let mut integral = Vec::new();
    let mut run = 0;
    let mut m0 = None;
    for m in 0..=max_z {
        lazy.stratum(m)?;
        let gm = tidy_payload(&exp_tilde_coeff(&e, lazy.computed(), m)?);
        integral.push(payload_integral(&gm));
        if gm.is_zero() {
            run += 1;
            if run == window && m0.is_none() {
                m0 = Some(m + 1 - window);
            }
        } else {
            run = 0;
            if !full {
                m0 = None;
            }
        }
        g.push(gm);
        if m0.is_some() && !full {
            break;
        }
    }
    if full {
        // Least m0 such that every later computed coefficient vanishes, with a full window.
        let last_nonzero = g.iter().rposition(|x| !x.is_zero());
        let start = last_nonzero.map_or(0, |k| k + 1);
        m0 = if g.len() - start >= window { Some(start) } else { None };
    }
    Ok(SpecialPoly { g, integral, m0, window, max_z })
}

/// `Σ_i e_i x^{q^i}` truncated where the terms drop below the precision of `x`.
pub fn exp_trunc(dm: &DrinfeldModule, x: &LaurentApprox) -> LaurentApprox {
    let prec = x.precision();
    let f = x.field().clone();
    let mut acc = LaurentApprox::zero(&f, prec);
    let v = x.val_bound();
    let mut i = 0usize;
    loop {
        let e = dm.exp_coeffs(i).pop().expect("nonempty");
        let ve = e.v_inf().expect("nonzero");
        let qi = (f.q() as i64).pow(i as u32);
        if ve + qi * v >= prec && i > 0 {
            break;
        }
        let term = LaurentApprox::from_ratfn(&e, prec - qi * v.min(0)).mul(&x.frobenius(i as u32));
        acc = acc.add(&term.with_precision(prec));
        i += 1;
    }
    acc
}

/// Stark-unit consistency for `E = K` and a constant payload `b ∈ A`.
#[derive(Clone, Debug)]
pub struct StarkReport {
    pub special: SpecialPoly,
    pub exp_value: RatFn,
    pub numeric: Z1Value,
    pub exp_of_numeric: LaurentApprox,
    pub residual_valuation: i64,
    pub prec: i64,
    pub slack: i64,
}

impl StarkReport {
    pub fn passes(&self) -> bool {
        self.residual_valuation >= self.prec - self.slack
    }
}

pub fn stark_unit(f: &Fq, b: &UPoly, max_z: usize, prec: i64, window: usize, slack: i64) -> Result<StarkReport> {
    let cf = CycField::trivial(f);
    let payload = MPoly::constant(0, true, cf.from_k(&RatFn::from_poly(b.clone())));
    let special = special_polynomial(&cf, &payload, max_z, window, false)?;
    let exp_value = special.value_at_one().coeff(&[]).as_k().expect("E = K").clone();
    let mut lazy = LazySeries::new(&cf, 1, &payload);
    let bound = crate::lseries::max_enum();
    let max_d = (0..64).take_while(|&d| (f.q() as u64).checked_pow(d).is_some_and(|c| c <= bound)).last().unwrap_or(0) as usize;
    let numeric = eval_z1(|d| Ok(lazy.stratum(d)?.coeff(&[]).as_k().expect("E = K").clone()), prec, window, max_d)?;
    let exp_of_numeric = exp_trunc(cf.module(), &numeric.value);
    let diff = exp_of_numeric.sub(&LaurentApprox::from_ratfn(&exp_value, prec));
    let residual_valuation = diff.val_bound();
    Ok(StarkReport { special, exp_value, numeric, exp_of_numeric, residual_valuation, prec, slack })
}

/// Both sides of the torsion specialization for one `m`.
#[derive(Clone, Debug)]
pub struct TorsionCheck {
    pub specialized: Vec<CycElem>,
    pub equivariant: Vec<CycElem>,
}

impl TorsionCheck {
    pub fn holds(&self) -> bool {
        self.specialized == self.equivariant
    }
}

/// `g_m(λ_P)` from the one-variable special polynomial over K against the special polynomial
/// of `f(λ_P)` over `K(λ_P)`, for `m ≤ M`.
pub fn torsion_specialization_check(f: &Fq, payload: &str, p: &UPoly, max_z: usize) -> Result<TorsionCheck> {
    let k = CycField::trivial(f);
    let e = CycField::new(f, std::slice::from_ref(p))?;
    let one_var = crate::lseries::parse_payload(&k, 1, payload)?;
    let lam = e.lambda(0);
    let subst = |x: &MPoly<CycElem>| -> CycElem {
        let mut acc = e.zero();
        for (exps, c) in x.terms() {
            let c = c.as_k().expect("coefficients in K");
            acc = acc.add(&ring_pow(&lam, exps[0]).scale(c));
        }
        acc.tidy()
    };
    let zero_var = MPoly::constant(0, true, subst(&one_var));
    let lhs = special_polynomial(&k, &one_var, max_z, DEFAULT_WINDOW, true)?;
    let rhs = special_polynomial(&e, &zero_var, max_z, DEFAULT_WINDOW, true)?;
    Ok(TorsionCheck {
        specialized: lhs.g.iter().map(subst).collect(),
        equivariant: rhs.g.iter().map(|x| x.coeff(&[]).tidy()).collect(),
    })
}

/// One row of an L-factor table.
#[derive(Clone, Debug)]
pub struct LFactorRow {
    pub q: UPoly,
    pub residue_degree: usize,
    pub norm: UPoly,
    pub fitting: UPoly,
}

impl LFactorRow {
    /// `[O/𝔓]_A / [φ(O/𝔓)]_A`.
    pub fn ratio(&self) -> RatFn {
        RatFn::new(self.norm.clone(), self.fitting.clone()).expect("nonzero")
    }
}

/// L-factor rows for every prime 𝔓 of `O_E` with `deg N𝔓 ≤ max_norm_deg`.
pub fn lfactor_table(cf: &CycField, max_q_deg: usize, max_norm_deg: usize) -> Result<Vec<LFactorRow>> {
    let f = cf.field();
    let dm = cf.module();
    let mut rows = Vec::new();
    for k in 1..=max_q_deg {
        for q in UPoly::irreducibles(f, k) {
            let s = cf.prime_splitting(&q)?;
            if s.f * k > max_norm_deg {
                continue;
            }
            for pr in cf.primes_above(&q)? {
                let (norm, fitting) = dm.lfactor_bruteforce(&pr.residue)?;
                rows.push(LFactorRow { q: q.clone(), residue_degree: s.f, norm, fitting });
            }
        }
    }
    Ok(rows)
}

/// Comparison of the three zeta routes to `z^D`.
#[derive(Clone, Debug)]
pub struct ClassFormulaReport {
    pub lfactor_product: Vec<RatFn>,
    pub euler: Vec<RatFn>,
    pub dirichlet: Vec<RatFn>,
    pub rows: Vec<LFactorRow>,
    pub a_eq_b: bool,
    pub b_eq_c: bool,
    pub value_at_one: Option<LaurentApprox>,
}

impl ClassFormulaReport {
    pub fn passes(&self) -> bool {
        self.a_eq_b && self.b_eq_c
    }

    pub fn text(c: &[RatFn]) -> String {
        poly_z_text(c)
    }
}

pub fn class_formula_report(cf: &CycField, dmax: usize, prec: i64) -> Result<ClassFormulaReport> {
    let f = cf.field();
    let rows = lfactor_table(cf, dmax, dmax)?;
    let mut series = vec![RatFn::zero(f); dmax + 1];
    series[0] = RatFn::one(f);
    for r in &rows {
        // L-factor N/F = 1/(1 − (N − F)/N), deformed by z^{deg N}.
        let c = RatFn::new(r.norm.sub(&r.fitting), r.norm.clone())?;
        let k = r.norm.deg() as usize;
        for d in k..=dmax {
            let t = series[d - k].mul(&c);
            series[d] = series[d].add(&t);
        }
    }
    let euler = euler_product_zeta(cf, 1, dmax)?;
    let dirichlet = dirichlet_zeta(cf, 1, dmax)?;
    let value_at_one = if prec > 0 {
        eval_z1(|d| dirichlet.get(d).cloned().ok_or(Error::PrecisionUnreachable(prec)), prec, DEFAULT_WINDOW, dmax)
            .ok()
            .map(|z| z.value)
    } else {
        None
    };
    Ok(ClassFormulaReport {
        a_eq_b: series == euler,
        b_eq_c: euler == dirichlet,
        lfactor_product: series,
        euler,
        dirichlet,
        rows,
        value_at_one,
    })
}

/// L-factor data of a rank-r module at primes of A.
#[derive(Clone, Debug)]
pub struct RankRow {
    pub p: UPoly,
    pub fitting: UPoly,
    pub ratio: RatFn,
    pub v_ratio_minus_one: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct RankReport {
    pub rank: usize,
    pub rows: Vec<RankRow>,
    pub product: RatFn,
    pub product_v: Option<i64>,
    pub product_sign: u32,
}

impl RankReport {
    /// Every ratio is a principal unit and so is their product.
    pub fn passes(&self) -> bool {
        self.rows.iter().all(|r| r.ratio.sign() == 1 && r.v_ratio_minus_one.is_none_or(|v| v >= 1))
            && self.product_sign == 1
            && self.product_v.is_none_or(|v| v >= 1)
    }

    /// Rows meeting `v(ratio − 1) ≥ deg P / r`.
    pub fn bound_count(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.v_ratio_minus_one.is_none_or(|v| v * self.rank as i64 >= r.p.deg()))
            .count()
    }
}

pub fn rank_r_report(dm: &DrinfeldModule, max_deg: usize) -> Result<RankReport> {
    let f = dm.field();
    let mut rows = Vec::new();
    let mut product = RatFn::one(f);
    for k in 1..=max_deg {
        for p in UPoly::irreducibles(f, k) {
            let res = ResidueField::new(f, k, &p);
            let (norm, fitting) = dm.lfactor_bruteforce(&res)?;
            debug_assert_eq!(norm, p);
            let ratio = RatFn::new(norm, fitting.clone())?;
            let v = ratio.sub(&RatFn::one(f)).v_inf();
            product = product.mul(&ratio);
            rows.push(RankRow { p, fitting, ratio, v_ratio_minus_one: v });
        }
    }
    let product_v = product.sub(&RatFn::one(f)).v_inf();
    let product_sign = product.sign();
    Ok(RankReport { rank: dm.rank(), rows, product, product_v, product_sign })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lseries::parse_payload;

    #[test]
    fn carlitz_one_is_one() {
        for p in [2u64, 3] {
            let f = Fq::new(p, 1).unwrap();
            let k = CycField::trivial(&f);
            let b = parse_payload(&k, 0, "1").unwrap();
            let sp = special_polynomial(&k, &b, 12, 3, false).unwrap();
            assert_eq!(sp.m0, Some(1));
            assert!(sp.all_integral());
            assert!(sp.g[0].coeff(&[]).as_k().unwrap().is_one());
        }
    }

    #[test]
    fn zero_payload() {
        let f = Fq::new(3, 1).unwrap();
        let k = CycField::trivial(&f);
        let sp = special_polynomial(&k, &MPoly::zero(0, true, &k.zero()), 6, 3, false).unwrap();
        assert_eq!(sp.m0, Some(0));
        assert!(sp.polynomial().is_empty());
    }

    #[test]
    fn one_variable_start() {
        let f = Fq::new(2, 1).unwrap();
        let k = CycField::trivial(&f);
        let x = parse_payload(&k, 1, "X").unwrap();
        let sp = special_polynomial(&k, &x, 10, 3, false).unwrap();
        assert_eq!(sp.g[0], x);
        assert!(sp.all_integral());
        assert!(sp.m0.is_some());
    }

    #[test]
    fn grading_is_exact() {
        let f = Fq::new(3, 1).unwrap();
        let k = CycField::trivial(&f);
        let b = parse_payload(&k, 0, "T").unwrap();
        let strata: Vec<_> = (0..=4).map(|d| crate::lseries::stratum_sum(&k, 1, d, &b).unwrap()).collect();
        let dm = k.module();
        let short = exp_tilde_apply(dm, &strata[..3], 2).unwrap();
        let long = exp_tilde_apply(dm, &strata, 4).unwrap();
        assert_eq!(short[..], long[..3]);
    }

    #[test]
    fn stark_q2() {
        let f = Fq::new(2, 1).unwrap();
        let r = stark_unit(&f, &UPoly::one(&f), 12, 12, 3, 2).unwrap();
        assert!(r.exp_value.is_one());
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn lfactor_rows_over_lambda_theta() {
        let f = Fq::new(3, 1).unwrap();
        let e = CycField::new(&f, &[UPoly::theta(&f)]).unwrap();
        for r in lfactor_table(&e, 2, 4).unwrap() {
            assert_eq!(r.norm, r.q.pow(r.residue_degree as u64));
            assert_eq!(r.fitting, r.norm.sub(&UPoly::one(&f)));
        }
    }
}
