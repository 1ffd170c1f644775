//! Genus-0 shtukas: f = t − θ, the module A[t_1, …, t_s][z] in the basis b_i(t) = Π_{k<i}(t − θ^{q^k}),
//! the isomorphism γ onto twisted polynomials, and the exponential of the Pellarin series.

use crate::drinfeld::{carlitz_d, theta_q_pow, DrinfeldModule};
use crate::error::{Error, Result};
use crate::field::Fq;
use crate::lseries::pellarin_series;
use crate::mpoly::MPoly;
use crate::ore::OrePoly;
use crate::ratfn::RatFn;
use crate::ring::{KAlgebra, Ring};
use crate::upoly::UPoly;
use std::collections::BTreeMap;


/// `b_i(t_j)` in `K[t_1, …, t_s]`.
pub fn b_factor(f: &Fq, s: usize, i: usize, j: usize) -> MPoly<RatFn> {
    let zero = RatFn::zero(f);
    let t = MPoly::var(s, false, j, &zero);
    (0..i).fold(MPoly::constant(s, false, RatFn::one(f)), |acc, k| {
        let node = MPoly::constant(s, false, RatFn::from_poly(theta_q_pow(f, k)));
        acc.mul(&t.sub(&node))
    })
}

/// `u_{aA} = a(t_1)⋯a(t_s)` for monic `a`.
pub fn u_ideal(a: &UPoly, s: usize) -> Result<MPoly<RatFn>> {
    if !a.is_monic() {
        return Err(Error::NotMonic(a.to_text("T")));
    }
    let f = a.field();
    let zero = RatFn::zero(f);
    let mut out = MPoly::constant(s, false, RatFn::one(f));
    for j in 0..s {
        let t = MPoly::var(s, false, j, &zero);
        let mut acc = MPoly::zero(s, false, &zero);
        for &c in a.coeffs().iter().rev() {
            acc = acc.mul(&t).add(&MPoly::constant(s, false, RatFn::constant(f, c)));
        }
        out = out.mul(&acc);
    }
    Ok(out)
}

/// Rows `t^k = Σ_i C[k][i] b_i(t)`; `C[k]` is the list of Carlitz coefficients of `φ_{θ^k}`.
fn monomial_to_b_rows(f: &Fq, kmax: usize) -> Vec<Vec<RatFn>> {
    let c = DrinfeldModule::carlitz(f);
    (0..=kmax).map(|k| c.phi_of_poly(&UPoly::monomial(f, 1, k)).into_iter().map(RatFn::from_poly).collect()).collect()
}

/// Element of `K[t_1, …, t_s]` stored by its coordinates in the product basis `Π_j b_{i_j}(t_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WsElem {
    f: Fq,
    s: usize,
    c: BTreeMap<Vec<usize>, RatFn>,
}

impl WsElem {
    pub fn zero(f: &Fq, s: usize) -> WsElem {
        WsElem { f: f.clone(), s, c: BTreeMap::new() }
    }

    pub fn one(f: &Fq, s: usize) -> WsElem {
        WsElem::basis(f, vec![0; s], RatFn::one(f))
    }

    /// `c · Π_j b_{idx_j}(t_j)`.
    pub fn basis(f: &Fq, idx: Vec<usize>, c: RatFn) -> WsElem {
        let mut w = WsElem::zero(f, idx.len());
        w.add_term(idx, c);
        w
    }

    pub fn nvars(&self) -> usize {
        self.s
    }

    pub fn coords(&self) -> &BTreeMap<Vec<usize>, RatFn> {
        &self.c
    }

    pub fn coord(&self, idx: &[usize]) -> RatFn {
        self.c.get(idx).cloned().unwrap_or_else(|| RatFn::zero(&self.f))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Every coordinate lies in A.
    pub fn is_integral(&self) -> bool {
        self.c.values().all(|x| x.is_integral())
    }

    fn add_term(&mut self, idx: Vec<usize>, x: RatFn) {
        if x.is_zero() {
            return;
        }
        let v = match self.c.remove(&idx) {
            Some(y) => y.add(&x),
            None => x,
        };
        if !v.is_zero() {
            self.c.insert(idx, v);
        }
    }

    pub fn add(&self, o: &WsElem) -> WsElem {
        let mut r = self.clone();
        for (i, x) in &o.c {
            r.add_term(i.clone(), x.clone());
        }
        r
    }

    pub fn scale(&self, a: &RatFn) -> WsElem {
        let mut r = WsElem::zero(&self.f, self.s);
        for (i, x) in &self.c {
            r.add_term(i.clone(), x.mul(a));
        }
        r
    }

    pub fn tidy(&self) -> WsElem {
        let mut r = WsElem::zero(&self.f, self.s);
        for (i, x) in &self.c {
            r.add_term(i.clone(), x.tidy());
        }
        r
    }

    /// `Π_j b_i(t_j) · x^{(i)}` with the twist on θ only; uses `b_i · b_k^{(i)} = b_{i+k}`.
    pub fn shift_twist(&self, i: usize) -> WsElem {
        let mut r = WsElem::zero(&self.f, self.s);
        for (idx, x) in &self.c {
            r.add_term(idx.iter().map(|k| k + i).collect(), x.twist(i as u32));
        }
        r
    }

    /// Coordinates of a polynomial given in the monomial `t`-basis.
    pub fn from_monomial(x: &MPoly<RatFn>) -> WsElem {
        let f = x.proto().field().clone();
        let s = x.nvars();
        let kmax = (0..s).map(|j| x.degree_in(j)).max().unwrap_or(0) as usize;
        let rows = monomial_to_b_rows(&f, kmax);
        let mut r = WsElem::zero(&f, s);
        for (e, c) in x.terms() {
            let mut partial: Vec<(Vec<usize>, RatFn)> = vec![(Vec::new(), c.clone())];
            for &k in e {
                let row = &rows[k as usize];
                partial = partial
                    .into_iter()
                    .flat_map(|(idx, v)| {
                        row.iter().enumerate().filter(|(_, r)| !r.is_zero()).map(move |(i, r)| {
                            let mut idx = idx.clone();
                            idx.push(i);
                            (idx, v.mul(r))
                        })
                    })
                    .collect();
            }
            for (idx, v) in partial {
                r.add_term(idx, v);
            }
        }
        r.tidy()
    }

    /// The polynomial in the monomial `t`-basis.
    pub fn to_monomial(&self) -> MPoly<RatFn> {
        let zero = RatFn::zero(&self.f);
        let mut out = MPoly::zero(self.s, false, &zero);
        let mut cache: BTreeMap<(usize, usize), MPoly<RatFn>> = BTreeMap::new();
        for (idx, x) in &self.c {
            let mut term = MPoly::constant(self.s, false, x.clone());
            for (j, &i) in idx.iter().enumerate() {
                let b = cache.entry((i, j)).or_insert_with(|| b_factor(&self.f, self.s, i, j));
                term = term.mul(b);
            }
            out = out.add(&term);
        }
        out.map_coeffs(|c| c.tidy())
    }

    /// Image under `Π_j b_{i_j}(t_j) ↦ Π_j X_j^{q^{i_j}}`, which carries `u_{aA}` to `φ_a(X_1)⋯φ_a(X_s)`.
    pub fn to_x_payload(&self) -> MPoly<RatFn> {
        let q = self.f.q() as u64;
        let zero = RatFn::zero(&self.f);
        let mut out = MPoly::zero(self.s, true, &zero);
        for (idx, x) in &self.c {
            out.add_term(idx.iter().map(|&i| q.pow(i as u32)).collect(), x.clone());
        }
        out
    }

    pub fn to_text(&self) -> String {
        if self.c.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (idx, x) in self.c.iter().rev() {
            let b: Vec<String> =
                idx.iter().enumerate().filter(|(_, &i)| i > 0).map(|(j, &i)| format!("b{i}(t{})", j + 1)).collect();
            let c = x.to_text("T");
            parts.push(match (b.is_empty(), x.is_one()) {
                (true, _) => c,
                (false, true) => b.join("*"),
                (false, false) => format!("({c})*{}", b.join("*")),
            });
        }
        parts.join("+")
    }
}

/// `γ(Σ_i c_i b_i(t)) = Σ_i c_i τ^i` for one variable.
pub fn gamma_iso(w: &WsElem) -> Result<OrePoly<RatFn>> {
    if w.s != 1 {
        return Err(Error::Invalid(format!("gamma needs one variable, got {}", w.s)));
    }
    let zero = RatFn::zero(&w.f);
    let n = w.c.keys().map(|k| k[0] + 1).max().unwrap_or(0);
    let c = (0..n).map(|i| w.coord(&[i])).collect();
    Ok(OrePoly::new(&zero, c))
}

/// `f · x^{(1)}` computed in the monomial basis, with the twist on θ only.
pub fn shtuka_twist(x: &WsElem) -> WsElem {
    let f = &x.f;
    let zero = RatFn::zero(f);
    let mut fx = MPoly::constant(x.s, false, RatFn::one(f));
    for j in 0..x.s {
        let t = MPoly::var(x.s, false, j, &zero);
        fx = fx.mul(&t.sub(&MPoly::constant(x.s, false, RatFn::theta(f))));
    }
    WsElem::from_monomial(&fx.mul(&x.to_monomial().twist(1)))
}

/// `ρ(a) · x = a(t_1)⋯a(t_s) · x`.
pub fn rho_mul(a: &UPoly, x: &WsElem) -> Result<WsElem> {
    if a.is_zero() {
        return Ok(WsElem::zero(&x.f, x.s));
    }
    let u = if a.is_monic() {
        u_ideal(a, x.s)?
    } else {
        let lead = a.coeffs()[a.deg() as usize];
        let inv = x.f.inv(lead);
        u_ideal(&a.scale(inv), x.s)?.scale(&RatFn::constant(&x.f, lead))
    };
    Ok(WsElem::from_monomial(&u.mul(&x.to_monomial())))
}

/// Exponential coefficients `Π_j b_i(t_j)/D_i` with `D_i = Π_{k<i}(θ^{q^i} − θ^{q^k})` formed directly.
pub fn shtuka_exp_coeff(f: &Fq, s: usize, i: usize) -> Result<MPoly<RatFn>> {
    let inv = RatFn::new(UPoly::one(f), carlitz_d(f, i))?;
    let b = (0..s).fold(MPoly::constant(s, false, RatFn::one(f)), |acc, j| acc.mul(&b_factor(f, s, i, j)));
    Ok(b.scale(&inv))
}

/// The shtuka-built exponential coefficients agree with `e_i(Carlitz) · Π_j b_i(t_j)` for `i ≤ N`, and
/// satisfy `E_i·(θ^{q^i} − θ) = Π_j(t_j − θ) · E_{i−1}^{(1)}`.
pub fn pellarin_exp_consistency(f: &Fq, s: usize, n: usize) -> Result<bool> {
    let e = DrinfeldModule::carlitz(f).exp_coeffs(n);
    let zero = RatFn::zero(f);
    let mut prev: Option<MPoly<RatFn>> = None;
    for (i, ei) in e.iter().enumerate() {
        let direct = shtuka_exp_coeff(f, s, i)?;
        let b = (0..s).fold(MPoly::constant(s, false, RatFn::one(f)), |acc, j| acc.mul(&b_factor(f, s, i, j)));
        if direct != b.scale(ei) {
            return Ok(false);
        }
        if let Some(p) = prev {
            let node = RatFn::theta(f);
            let fac = (0..s).fold(MPoly::constant(s, false, RatFn::one(f)), |acc, j| {
                acc.mul(&MPoly::var(s, false, j, &zero).sub(&MPoly::constant(s, false, node.clone())))
            });
            let lhs = direct.scale(&RatFn::from_poly(theta_q_pow(f, i).sub(&UPoly::theta(f))));
            if lhs != fac.mul(&p.twist(1)) {
                return Ok(false);
            }
        }
        prev = Some(direct);
    }
    Ok(true)
}

/// `exp_φ̃_s(L(φ_s; 1; z) · w)` for one sample, by z-degree.
#[derive(Clone, Debug)]
pub struct ShtukaSample {
    pub w: WsElem,
    pub g: Vec<WsElem>,
    pub integral: Vec<bool>,
    /// Least m with `g_m = … = g_D = 0`, when that tail is nonempty.
    pub zero_from: Option<usize>,
}

impl ShtukaSample {
    pub fn all_integral(&self) -> bool {
        self.integral.iter().all(|&b| b)
    }
}

/// `g_m = Σ_{i+d=m} e_i · Π_j b_i(t_j) · (L_d·w)^{(i)}` in the b-basis, for each sample, to `z^D`.
pub fn verify_exp_integrality(f: &Fq, s: usize, dmax: usize, samples: &[WsElem]) -> Result<Vec<ShtukaSample>> {
    if samples.iter().any(|w| w.s != s) {
        return Err(Error::Mismatch);
    }
    let strata = pellarin_series(f, s, dmax)?;
    let e = DrinfeldModule::carlitz(f).exp_coeffs(dmax);
    samples
        .iter()
        .map(|w| {
            let wm = w.to_monomial();
            let sw: Vec<WsElem> = strata.iter().map(|l| WsElem::from_monomial(&l.mul(&wm))).collect();
            let g: Vec<WsElem> = (0..=dmax)
                .map(|m| {
                    (0..=m)
                        .fold(WsElem::zero(f, s), |acc, i| acc.add(&sw[m - i].shift_twist(i).scale(&e[i])))
                        .tidy()
                })
                .collect();
            let integral = g.iter().map(|x| x.is_integral()).collect();
            let last = g.iter().rposition(|x| !x.is_zero());
            let zero_from = match last {
                Some(k) if k == dmax => None,
                Some(k) => Some(k + 1),
                None => Some(0),
            };
            Ok(ShtukaSample { w: w.clone(), g, integral, zero_from })
        })
        .collect()
}

/// Random one-variable element with b-index below `len` and coordinates in A of degree at most `deg`.
pub fn random_ws1(f: &Fq, rng: &mut impl rand::Rng, len: usize, deg: usize) -> WsElem {
    let mut w = WsElem::zero(f, 1);
    for i in 0..len {
        w.add_term(vec![i], RatFn::from_poly(UPoly::random(f, rng, deg)));
    }
    w
}

/// `γ(f·x^{(1)}) = τ·γ(x)` and `γ(ρ(a)·x) = γ(x)·φ_a` on `count` random samples, with `deg a ≤ 3`.
pub fn gamma_intertwining(f: &Fq, rng: &mut impl rand::Rng, count: usize) -> Result<bool> {
    let zero = RatFn::zero(f);
    let tau = OrePoly::tau_pow(&zero, 1);
    let c = DrinfeldModule::carlitz(f);
    for _ in 0..count {
        let x = random_ws1(f, rng, 4, 3);
        let gx = gamma_iso(&x)?;
        if gamma_iso(&shtuka_twist(&x))? != tau.mul(&gx) {
            return Ok(false);
        }
        let a = UPoly::random(f, rng, 3);
        if gamma_iso(&rho_mul(&a, &x)?)? != gx.mul(&c.phi_of(&a)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The sample `t_j` as an element of `W_s`.
pub fn t_var(f: &Fq, s: usize, j: usize) -> WsElem {
    WsElem::from_monomial(&MPoly::var(s, false, j, &RatFn::zero(f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CycField;
    use crate::logalg::special_polynomial;
    use crate::lseries::parse_payload;

    fn up(f: &Fq, s: &str) -> UPoly {
        UPoly::parse(f, s, "T").unwrap()
    }

    fn names(s: usize) -> Vec<String> {
        (1..=s).map(|j| format!("t{j}")).collect()
    }

    #[test]
    fn b_factors() {
        let f2 = Fq::new(2, 1).unwrap();
        let txt = |x: &MPoly<RatFn>| x.to_text(&names(1), |c| c.to_text("T"));
        assert_eq!(txt(&b_factor(&f2, 1, 0, 0)), "1");
        assert_eq!(txt(&b_factor(&f2, 1, 1, 0)), "t1+T");
        assert_eq!(txt(&b_factor(&f2, 1, 2, 0)), "t1^2+(T^2+T)*t1+T^3");
    }

    #[test]
    fn u_ideals() {
        let f2 = Fq::new(2, 1).unwrap();
        let zero = RatFn::zero(&f2);
        assert_eq!(u_ideal(&UPoly::one(&f2), 2).unwrap(), MPoly::constant(2, false, RatFn::one(&f2)));
        assert_eq!(u_ideal(&up(&f2, "T"), 1).unwrap(), MPoly::var(1, false, 0, &zero));
        let t1 = MPoly::var(2, false, 0, &zero);
        let t2 = MPoly::var(2, false, 1, &zero);
        let one = MPoly::constant(2, false, RatFn::one(&f2));
        let expect = t1.mul(&t1).add(&one).mul(&t2.mul(&t2).add(&one));
        assert_eq!(u_ideal(&up(&f2, "T^2+1"), 2).unwrap(), expect);
        assert!(u_ideal(&up(&Fq::new(3, 1).unwrap(), "2*T"), 1).is_err());
    }

    #[test]
    fn gamma_examples() {
        let f3 = Fq::new(3, 1).unwrap();
        let zero = RatFn::zero(&f3);
        let c = DrinfeldModule::carlitz(&f3);
        assert_eq!(gamma_iso(&WsElem::one(&f3, 1)).unwrap(), OrePoly::one(&zero));
        let fb = WsElem::basis(&f3, vec![1], RatFn::one(&f3));
        assert_eq!(gamma_iso(&fb).unwrap(), OrePoly::tau_pow(&zero, 1));
        assert_eq!(gamma_iso(&t_var(&f3, 1, 0)).unwrap(), *c.phi_theta());
    }

    #[test]
    fn gamma_intertwines() {
        use rand::SeedableRng;
        for p in [2u64, 3] {
            let f = Fq::new(p, 1).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
            assert!(gamma_intertwining(&f, &mut rng, 5).unwrap());
        }
    }

    #[test]
    fn round_trip() {
        let f3 = Fq::new(3, 1).unwrap();
        let u = u_ideal(&up(&f3, "T^3+T+2"), 2).unwrap();
        let w = WsElem::from_monomial(&u);
        assert_eq!(w.to_monomial(), u);
        assert!(w.is_integral());
    }

    #[test]
    fn exp_consistency() {
        for (p, s) in [(2u64, 1usize), (3, 2)] {
            let f = Fq::new(p, 1).unwrap();
            assert!(pellarin_exp_consistency(&f, s, 4).unwrap());
        }
    }

    #[test]
    fn zero_and_carlitz_samples() {
        let f2 = Fq::new(2, 1).unwrap();
        let r = verify_exp_integrality(&f2, 1, 4, &[WsElem::zero(&f2, 1)]).unwrap();
        assert!(r[0].all_integral() && r[0].zero_from == Some(0));
        let r = verify_exp_integrality(&f2, 0, 5, &[WsElem::one(&f2, 0)]).unwrap();
        assert_eq!(r[0].g[0], WsElem::one(&f2, 0));
        assert_eq!(r[0].zero_from, Some(1));
    }

    #[test]
    fn one_variable_matches_x_payload() {
        let f3 = Fq::new(3, 1).unwrap();
        let r = verify_exp_integrality(&f3, 1, 5, &[WsElem::one(&f3, 1)]).unwrap();
        assert!(r[0].all_integral());
        let cf = CycField::trivial(&f3);
        let sp = special_polynomial(&cf, &parse_payload(&cf, 1, "X").unwrap(), 5, 3, true).unwrap();
        for (m, gm) in r[0].g.iter().enumerate() {
            let lhs = gm.to_x_payload();
            let mut rhs = MPoly::zero(1, true, &RatFn::zero(&f3));
            for (e, c) in sp.g[m].terms() {
                rhs.add_term(e.clone(), c.as_k().expect("coefficients in K").clone());
            }
            assert_eq!(lhs, rhs, "m = {m}");
        }
    }
}
