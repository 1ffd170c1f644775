//! Drinfeld modules over A = F_q[θ].

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::ore::{OrePoly, TauSeries};
use crate::ratfn::RatFn;
use crate::residue::{charpoly, ResidueField};
use crate::upoly::UPoly;
use std::sync::RwLock;

#[derive(Clone, Debug, PartialEq)]
pub struct ExpLogData {
    pub exp: Vec<RatFn>,
    pub log: Vec<RatFn>,
}

/// Rank-r module given by `φ_θ = θ + g_1 τ + … + g_r τ^r` with `g_i ∈ A`.
pub struct DrinfeldModule {
    f: Fq,
    phi_theta: OrePoly<RatFn>,
    coeffs: Vec<UPoly>,
    cache: RwLock<Option<ExpLogData>>,
}

impl Clone for DrinfeldModule {
    fn clone(&self) -> Self {
        DrinfeldModule {
            f: self.f.clone(),
            phi_theta: self.phi_theta.clone(),
            coeffs: self.coeffs.clone(),
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
        }
    }
}

impl std::fmt::Debug for DrinfeldModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DrinfeldModule(phi_T = {:?})", self.coeffs)
    }
}

impl DrinfeldModule {
    /// `φ_θ = θ + τ`.
    pub fn carlitz(f: &Fq) -> DrinfeldModule {
        DrinfeldModule::new(f, vec![UPoly::theta(f), UPoly::one(f)]).expect("Carlitz data is valid")
    }

    /// From the coefficients of `φ_θ`; the constant term must be θ and the top one nonzero.
    pub fn new(f: &Fq, coeffs: Vec<UPoly>) -> Result<DrinfeldModule> {
        if coeffs.first() != Some(&UPoly::theta(f)) {
            return Err(Error::Invalid("constant term of phi_T must be T".into()));
        }
        if coeffs.len() < 2 || coeffs.last().is_some_and(|c| c.is_zero()) {
            return Err(Error::Invalid("phi_T must have positive tau-degree".into()));
        }
        let zero = RatFn::zero(f);
        let phi_theta = OrePoly::new(&zero, coeffs.iter().cloned().map(RatFn::from_poly).collect());
        Ok(DrinfeldModule { f: f.clone(), phi_theta, coeffs, cache: RwLock::new(None) })
    }

    /// `φ_θ = θ + g τ + Δ τ^2`.
    pub fn rank2(f: &Fq, g: UPoly, delta: UPoly) -> Result<DrinfeldModule> {
        DrinfeldModule::new(f, vec![UPoly::theta(f), g, delta])
    }

    pub fn field(&self) -> &Fq {
        &self.f
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_carlitz(&self) -> bool {
        self.rank() == 1 && self.coeffs[1].is_one()
    }

    pub fn phi_theta(&self) -> &OrePoly<RatFn> {
        &self.phi_theta
    }

    /// `φ_θ` coefficients in A.
    pub fn phi_theta_coeffs(&self) -> &[UPoly] {
        &self.coeffs
    }

    /// `φ_a = a(φ_θ)` by Horner's rule.
    pub fn phi_of(&self, a: &UPoly) -> OrePoly<RatFn> {
        let zero = RatFn::zero(&self.f);
        let mut acc = OrePoly::zero(&zero);
        for &c in a.coeffs().iter().rev() {
            acc = acc.mul(&self.phi_theta).add(&OrePoly::constant(RatFn::constant(&self.f, c)));
        }
        acc
    }

    /// `φ_a` with coefficients in A.
    pub fn phi_of_poly(&self, a: &UPoly) -> Vec<UPoly> {
        self.phi_of(a).coeffs().iter().map(|c| c.as_poly().expect("phi_a has coefficients in A")).collect()
    }

    fn b_inv(&self, n: usize) -> RatFn {
        let mut b = vec![0u64; n];
        b[n - 1] = 1;
        RatFn::over_b(UPoly::one(&self.f), b)
    }

    fn compute(&self, n: usize) -> ExpLogData {
        let r = self.rank();
        let g: Vec<RatFn> = self.coeffs.iter().cloned().map(RatFn::from_poly).collect();
        let mut e = vec![RatFn::one(&self.f)];
        let mut l = vec![RatFn::one(&self.f)];
        for k in 1..=n {
            // (θ^{q^k} − θ) e_k = Σ_l g_l e_{k−l}^{q^l}
            let mut s = RatFn::zero(&self.f);
            for j in 1..=r.min(k) {
                s = s.add(&g[j].mul(&e[k - j].twist(j as u32)));
            }
            e.push(s.mul(&self.b_inv(k)).tidy());
            // (θ − θ^{q^k}) l_k = Σ_l l_{k−l} g_l^{q^{k−l}}
            let mut s = RatFn::zero(&self.f);
            for j in 1..=r.min(k) {
                s = s.add(&l[k - j].mul(&g[j].twist((k - j) as u32)));
            }
            l.push(s.mul(&self.b_inv(k)).neg().tidy());
        }
        ExpLogData { exp: e, log: l }
    }

    fn data(&self, n: usize) -> ExpLogData {
        if let Some(d) = self.cache.read().expect("cache lock").as_ref() {
            if d.exp.len() > n {
                return ExpLogData { exp: d.exp[..=n].to_vec(), log: d.log[..=n].to_vec() };
            }
        }
        let d = self.compute(n);
        let mut w = self.cache.write().expect("cache lock");
        if w.as_ref().is_none_or(|old| old.exp.len() <= n) {
            *w = Some(d.clone());
        }
        d
    }

    /// `e_0, …, e_n`.
    pub fn exp_coeffs(&self, n: usize) -> Vec<RatFn> {
        self.data(n).exp
    }

    /// `l_0, …, l_n`.
    pub fn log_coeffs(&self, n: usize) -> Vec<RatFn> {
        self.data(n).log
    }

    /// `(φ_I, ψ(I))` for the ideal generated by a monic `I`.
    pub fn phi_ideal(&self, i: &UPoly) -> Result<(OrePoly<RatFn>, UPoly)> {
        if !i.is_monic() {
            return Err(Error::NotMonic(i.to_string()));
        }
        Ok((self.phi_of(i), i.clone()))
    }

    /// `G(X) = φ_P(X)/X`, coefficients of `X^0, X^1, …`.
    pub fn torsion_poly(&self, p: &UPoly) -> Result<TorsionPoly> {
        if !p.is_monic() {
            return Err(Error::NotMonic(p.to_string()));
        }
        if !p.is_irreducible() {
            return Err(Error::NotIrreducible(p.to_string()));
        }
        if self.rank() != 1 {
            return Err(Error::Invalid("torsion polynomials need a rank-1 module".into()));
        }
        let phi = self.phi_of_poly(p);
        let q = self.f.q() as usize;
        let top = q.pow(phi.len() as u32 - 1) - 1;
        let mut c = vec![UPoly::zero(&self.f); top + 1];
        for (k, a) in phi.iter().enumerate() {
            c[q.pow(k as u32) - 1] = a.clone();
        }
        Ok(TorsionPoly { p: p.clone(), coeffs: c })
    }

    /// Characteristic polynomials of multiplication by θ and of the φ_θ-action on a residue field.
    pub fn lfactor_bruteforce(&self, res: &ResidueField) -> Result<(UPoly, UPoly)> {
        let f = &self.f;
        let gbar: Vec<UPoly> = self.coeffs.iter().map(|c| res.eval(c, res.theta_bar())).collect();
        let action = |x: &UPoly| {
            let mut acc = UPoly::zero(f);
            for (l, g) in gbar.iter().enumerate() {
                acc = acc.add(&res.mul(g, &res.frob(x, l as u32)));
            }
            acc
        };
        let tm = res.matrix_of(|x| res.mul(x, res.theta_bar()));
        let am = res.matrix_of(&action);
        // Linearity over F_q, checked on all pairs of basis vectors and scalar multiples.
        let m = res.dim();
        for i in 0..m {
            for j in 0..m {
                let (bi, bj) = (UPoly::monomial(f, 1, i), UPoly::monomial(f, 1, j));
                if action(&bi.add(&bj)) != action(&bi).add(&action(&bj)) {
                    return Err(Error::NonLinearAction);
                }
            }
            for c in f.elements() {
                let bi = UPoly::monomial(f, c, i);
                if action(&bi) != action(&UPoly::monomial(f, 1, i)).scale(c) {
                    return Err(Error::NonLinearAction);
                }
            }
        }
        Ok((charpoly(f, &tm), charpoly(f, &am)))
    }
}

/// `G(X) = Σ_k φ_{P,k} X^{q^k − 1}` attached to a monic irreducible P.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionPoly {
    pub p: UPoly,
    pub coeffs: Vec<UPoly>,
}

impl TorsionPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Leading coefficient 1, all others divisible by P, constant term ψ(P) not divisible by P².
    pub fn is_eisenstein(&self) -> bool {
        let n = self.degree();
        if !self.coeffs[n].is_one() {
            return false;
        }
        let p2 = self.p.mul(&self.p);
        self.coeffs[..n].iter().all(|c| c.rem(&self.p).is_zero()) && !self.coeffs[0].rem(&p2).is_zero()
    }

    /// `X·G'(X) + G(X)`, which equals the constant ψ(P).
    pub fn xg_prime_plus_g(&self) -> Vec<UPoly> {
        let f = self.p.field();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale(f.from_int(k as i64 + 1)))
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .skip_while(|c| c.is_zero())
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "X".into(),
                _ => format!("X^{k}"),
            };
            let cs = c.to_text("T");
            let cs = if c.nnz() > 1 { format!("({cs})") } else { cs };
            parts.push(match (mono.is_empty(), c.is_one()) {
                (true, _) => cs,
                (false, true) => mono,
                (false, false) => format!("{cs}*{mono}"),
            });
        }
        parts.join("+")
    }
}

/// `θ^{q^k}`.
pub fn theta_q_pow(f: &Fq, k: usize) -> UPoly {
    UPoly::monomial(f, 1, (f.q() as usize).pow(k as u32))
}

/// `D_i = Π_{k<i}(θ^{q^i} − θ^{q^k})`, formed directly.
pub fn carlitz_d(f: &Fq, i: usize) -> UPoly {
    let top = theta_q_pow(f, i);
    (0..i).fold(UPoly::one(f), |acc, k| acc.mul(&top.sub(&theta_q_pow(f, k))))
}

/// `L_i = Π_{1≤k≤i}(θ − θ^{q^k})`, formed directly.
pub fn carlitz_l(f: &Fq, i: usize) -> UPoly {
    (1..=i).fold(UPoly::one(f), |acc, k| acc.mul(&UPoly::theta(f).sub(&theta_q_pow(f, k))))
}

/// Carlitz `e_i = 1/D_i` and `l_i = 1/L_i` for `i ≤ n`.
pub fn carlitz_closed_forms(f: &Fq, n: usize) -> Result<bool> {
    let c = DrinfeldModule::carlitz(f);
    let e = c.exp_coeffs(n);
    let l = c.log_coeffs(n);
    for i in 0..=n {
        if e[i] != RatFn::new(UPoly::one(f), carlitz_d(f, i))? || l[i] != RatFn::new(UPoly::one(f), carlitz_l(f, i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

impl DrinfeldModule {
    /// `exp ∘ log = log ∘ exp = 1` modulo `τ^{n+1}`.
    pub fn exp_log_inverse(&self, n: usize) -> bool {
        let e = TauSeries::new(&RatFn::zero(&self.f), self.exp_coeffs(n), n + 1);
        let l = TauSeries::new(&RatFn::zero(&self.f), self.log_coeffs(n), n + 1);
        e.mul(&l).is_one() && l.mul(&e).is_one()
    }

    /// `exp · a = φ_a · exp` modulo `τ^{n+1}`.
    pub fn functional_equation(&self, a: &UPoly, n: usize) -> bool {
        let zero = RatFn::zero(&self.f);
        let e = TauSeries::new(&zero, self.exp_coeffs(n), n + 1);
        let ca = TauSeries::new(&zero, vec![RatFn::from_poly(a.clone())], n + 1);
        let pa = TauSeries::from_ore(&self.phi_of(a), n + 1);
        e.mul(&ca) == pa.mul(&e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{KAlgebra, MPoly, Ring};

    fn up(f: &Fq, s: &str) -> UPoly {
        UPoly::parse(f, s, "T").unwrap()
    }

    #[test]
    fn carlitz_first_coefficients() {
        for p in [2u64, 3] {
            let f = Fq::new(p, 1).unwrap();
            let c = DrinfeldModule::carlitz(&f);
            let e = c.exp_coeffs(2);
            let l = c.log_coeffs(2);
            let q = f.q() as usize;
            let b1 = RatFn::new(UPoly::one(&f), UPoly::binomial(&f, q, 1)).unwrap();
            assert!(e[0].is_one() && l[0].is_one());
            assert_eq!(e[1], b1);
            assert_eq!(l[1], b1.neg());
        }
    }

    #[test]
    fn rank_two_first_step() {
        let f3 = Fq::new(3, 1).unwrap();
        let g = up(&f3, "T");
        let m = DrinfeldModule::rank2(&f3, g.clone(), UPoly::one(&f3)).unwrap();
        let e = m.exp_coeffs(1);
        assert_eq!(e[1], RatFn::new(g, UPoly::binomial(&f3, 3, 1)).unwrap());
    }

    #[test]
    fn phi_ideal_examples() {
        let f3 = Fq::new(3, 1).unwrap();
        let c = DrinfeldModule::carlitz(&f3);
        let (phi, psi) = c.phi_ideal(&up(&f3, "T^2")).unwrap();
        assert_eq!(psi, up(&f3, "T^2"));
        let got: Vec<String> = phi.coeffs().iter().map(|x| x.to_text("T")).collect();
        assert_eq!(got, vec!["T^2", "T^3+T", "1"]);
        let (one, psi1) = c.phi_ideal(&UPoly::one(&f3)).unwrap();
        assert!(psi1.is_one() && one.coeffs().len() == 1 && one.coeffs()[0].is_one());
        assert!(c.phi_ideal(&up(&f3, "2*T")).is_err());
    }

    #[test]
    fn torsion_examples() {
        let f3 = Fq::new(3, 1).unwrap();
        let g = DrinfeldModule::carlitz(&f3).torsion_poly(&up(&f3, "T")).unwrap();
        assert_eq!(g.to_text(), "X^2+T");
        let f2 = Fq::new(2, 1).unwrap();
        let c2 = DrinfeldModule::carlitz(&f2);
        assert_eq!(c2.torsion_poly(&up(&f2, "T")).unwrap().to_text(), "X+T");
        let g = c2.torsion_poly(&up(&f2, "T^2+T+1")).unwrap();
        assert_eq!(g.to_text(), "X^3+(T^2+T+1)*X+(T^2+T+1)");
        // Independent route: Horner with composition, acc ↦ θ·acc + acc^2 + c·X in K[X].
        let zero = RatFn::zero(&f2);
        let x = MPoly::var(1, false, 0, &zero);
        let mut acc = MPoly::zero(1, false, &zero);
        for &c in up(&f2, "T^2+T+1").coeffs().iter().rev() {
            acc = acc.scale(&RatFn::theta(&f2)).add(&acc.mul(&acc)).add(&x.scale(&RatFn::constant(&f2, c)));
        }
        for (k, c) in g.coeffs.iter().enumerate() {
            assert_eq!(acc.coeff(&[k as u64 + 1]), RatFn::from_poly(c.clone()));
        }
        assert_eq!(acc.len(), 3);
        assert!(g.is_eisenstein());
        assert!(c2.torsion_poly(&up(&f2, "T^2+1")).is_err());
    }

    #[test]
    fn lfactor_over_theta() {
        for p in [2u64, 3] {
            let f = Fq::new(p, 1).unwrap();
            let c = DrinfeldModule::carlitz(&f);
            let t = UPoly::theta(&f);
            let res = ResidueField::new(&f, 1, &t);
            let (n, a) = c.lfactor_bruteforce(&res).unwrap();
            assert_eq!(n, t);
            assert_eq!(a, t.sub(&UPoly::one(&f)));
        }
    }

    #[test]
    fn closed_forms_and_identities() {
        for (p, d) in [(2u64, 1u32), (3, 1), (2, 2)] {
            let f = Fq::new(p, d).unwrap();
            assert!(carlitz_closed_forms(&f, 5).unwrap());
            let c = DrinfeldModule::carlitz(&f);
            assert!(c.exp_log_inverse(5));
            assert!(c.functional_equation(&UPoly::parse(&f, "T^2+1", "T").unwrap(), 5));
        }
        let f = Fq::new(3, 1).unwrap();
        let r2 = DrinfeldModule::rank2(&f, UPoly::theta(&f), UPoly::one(&f)).unwrap();
        assert!(r2.exp_log_inverse(4));
        assert!(r2.functional_equation(&UPoly::theta(&f), 4));
    }
}
