//! Determinants over K[z] of equivariant series acting on E, and the Dedekind Euler-factor identity.

use crate::cyclotomic::CycField;
use crate::error::{Error, Result};
use crate::lseries::{euler_product_zeta, group_zseries, poly_z_text};
use crate::ratfn::RatFn;
use crate::field::Fq;
use crate::upoly::UPoly;

/// Polynomial in z with coefficients in K, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyZ {
    f: Fq,
    c: Vec<RatFn>,
}

impl PolyZ {
    pub fn new(f: &Fq, mut c: Vec<RatFn>) -> PolyZ {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        PolyZ { f: f.clone(), c }
    }

    pub fn zero(f: &Fq) -> PolyZ {
        PolyZ::new(f, Vec::new())
    }

    pub fn one(f: &Fq) -> PolyZ {
        PolyZ::new(f, vec![RatFn::one(f)])
    }

    /// `c·z^k`.
    pub fn monomial(c: RatFn, k: usize) -> PolyZ {
        let f = c.field().clone();
        let mut v = vec![RatFn::zero(&f); k + 1];
        v[k] = c;
        PolyZ::new(&f, v)
    }

    pub fn coeffs(&self) -> &[RatFn] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> RatFn {
        self.c.get(k).cloned().unwrap_or_else(|| RatFn::zero(&self.f))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn add(&self, o: &PolyZ) -> PolyZ {
        let n = self.c.len().max(o.c.len());
        PolyZ::new(&self.f, (0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }

    pub fn neg(&self) -> PolyZ {
        PolyZ::new(&self.f, self.c.iter().map(|x| x.neg()).collect())
    }

    pub fn sub(&self, o: &PolyZ) -> PolyZ {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &PolyZ) -> PolyZ {
        if self.is_zero() || o.is_zero() {
            return PolyZ::zero(&self.f);
        }
        let mut c = vec![RatFn::zero(&self.f); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = c[i + j].add(&a.mul(b));
                }
            }
        }
        PolyZ::new(&self.f, c.into_iter().map(|x| x.tidy()).collect())
    }

    pub fn scale(&self, a: &RatFn) -> PolyZ {
        PolyZ::new(&self.f, self.c.iter().map(|x| x.mul(a)).collect())
    }

    pub fn pow(&self, e: u64) -> PolyZ {
        (0..e).fold(PolyZ::one(&self.f), |acc, _| acc.mul(self))
    }

    pub fn truncate(&self, d: usize) -> PolyZ {
        PolyZ::new(&self.f, self.c.iter().take(d + 1).cloned().collect())
    }

    /// Exact quotient, `None` when the division leaves a remainder.
    pub fn exact_div(&self, d: &PolyZ) -> Option<PolyZ> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(self.clone());
        }
        let lead_inv = d.c[dd].inv().ok()?;
        let mut r = self.c.clone();
        if r.len() < dd + 1 {
            return None;
        }
        let mut qt = vec![RatFn::zero(&self.f); r.len() - dd];
        for k in (0..qt.len()).rev() {
            let t = r[k + dd].mul(&lead_inv);
            if t.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                if !dj.is_zero() {
                    r[k + j] = r[k + j].sub(&t.mul(dj));
                }
            }
            qt[k] = t;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(PolyZ::new(&self.f, qt))
    }

    pub fn to_text(&self) -> String {
        poly_z_text(&self.c)
    }
}

/// Matrix over K[z] of a K[z]-linear operator on E in the monomial basis; column j is the image
/// of basis element j.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub dim: usize,
    pub entries: Vec<Vec<PolyZ>>,
}

impl OperatorMatrix {
    pub fn identity(f: &Fq, dim: usize) -> OperatorMatrix {
        let entries =
            (0..dim).map(|i| (0..dim).map(|j| if i == j { PolyZ::one(f) } else { PolyZ::zero(f) }).collect()).collect();
        OperatorMatrix { dim, entries }
    }

    pub fn mul(&self, o: &OperatorMatrix) -> OperatorMatrix {
        let n = self.dim;
        let f = &self.entries[0][0].f;
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(PolyZ::zero(f), |acc, k| acc.add(&self.entries[i][k].mul(&o.entries[k][j]))))
                    .collect()
            })
            .collect();
        OperatorMatrix { dim: n, entries }
    }

    pub fn truncate(&self, d: usize) -> OperatorMatrix {
        OperatorMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|r| r.iter().map(|x| x.truncate(d)).collect()).collect(),
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &OperatorMatrix) -> OperatorMatrix {
        let f = &self.entries[0][0].f;
        let n = self.dim + o.dim;
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i < self.dim, j < self.dim) {
                        (true, true) => self.entries[i][j].clone(),
                        (false, false) => o.entries[i - self.dim][j - self.dim].clone(),
                        _ => PolyZ::zero(f),
                    })
                    .collect()
            })
            .collect();
        OperatorMatrix { dim: n, entries }
    }
}

/// Galois matrix of each group element on the monomial basis.
fn galois_matrices(cf: &CycField) -> Result<Vec<Vec<Vec<RatFn>>>> {
    let n = cf.degree();
    (0..cf.group_order())
        .map(|g| {
            let cols: Vec<Vec<RatFn>> = (0..n)
                .map(|j| {
                    let mut b = cf.zero().coords().to_vec();
                    b[j] = RatFn::one(cf.field());
                    Ok(cf.galois_act(g, &cf.from_coords(b)?)?.coords().to_vec())
                })
                .collect::<Result<_>>()?;
            Ok((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
        })
        .collect()
}

/// Operator `x ↦ Σ_d z^d Σ_g c_{d,g} σ_g(x)` for group-ring strata `c_{d,·}`.
pub fn operator_matrix(cf: &CycField, strata: &[Vec<RatFn>]) -> Result<OperatorMatrix> {
    let f = cf.field();
    let n = cf.degree();
    let mats = galois_matrices(cf)?;
    let mut entries = vec![vec![vec![RatFn::zero(f); strata.len()]; n]; n];
    for (d, s) in strata.iter().enumerate() {
        if s.len() != cf.group_order() {
            return Err(Error::Mismatch);
        }
        for (g, c) in s.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    let m = &mats[g][i][j];
                    if !m.is_zero() {
                        entries[i][j][d] = entries[i][j][d].add(&c.mul(m));
                    }
                }
            }
        }
    }
    Ok(OperatorMatrix {
        dim: n,
        entries: entries.into_iter().map(|r| r.into_iter().map(|c| PolyZ::new(f, c)).collect()).collect(),
    })
}

/// Fraction-free elimination over K[z]; pivots are the first nonzero entry by row order.
pub fn det(m: &OperatorMatrix) -> PolyZ {
    let n = m.dim;
    let f = m.entries[0][0].f.clone();
    let mut a = m.entries.clone();
    let mut neg = false;
    let mut prev = PolyZ::one(&f);
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return PolyZ::zero(&f);
        };
        if piv != k {
            a.swap(piv, k);
            neg = !neg;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = PolyZ::zero(&f);
        }
        prev = a[k][k].clone();
    }
    let d = if n == 0 { PolyZ::one(&f) } else { a[n - 1][n - 1].clone() };
    if neg {
        d.neg()
    } else {
        d
    }
}

/// Determinant re-truncated at `z^D`.
pub fn det_truncated(m: &OperatorMatrix, dmax: usize) -> PolyZ {
    det(&m.truncate(dmax)).truncate(dmax)
}

/// Both sides of the per-prime identity.
#[derive(Clone, Debug)]
pub struct EulerFactorCheck {
    pub p: UPoly,
    pub order: usize,
    pub lhs: PolyZ,
    pub rhs: PolyZ,
}

impl EulerFactorCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `det(1 − z^{deg P}/P · σ_P | E) = (1 − z^{e deg P}/P^e)^{[E:K]/e}` with e the order of `σ_P`.
pub fn euler_factor_det_check(cf: &CycField, p: &UPoly) -> Result<EulerFactorCheck> {
    if !p.is_monic() {
        return Err(Error::NotMonic(p.to_text("T")));
    }
    if !p.is_irreducible() {
        return Err(Error::NotIrreducible(p.to_text("T")));
    }
    if cf.is_ramified(p) {
        return Err(Error::Ramified(p.to_text("T")));
    }
    let f = cf.field();
    let g = cf.group_of(p).expect("unramified");
    let dp = p.deg() as usize;
    let inv_p = RatFn::inv_monic(p)?;
    let mut strata = vec![vec![RatFn::zero(f); cf.group_order()]; dp + 1];
    strata[0][cf.group_identity()] = RatFn::one(f);
    strata[dp][g] = inv_p.neg();
    let lhs = det(&operator_matrix(cf, &strata)?);
    let e = cf.group_order_of(g);
    let factor = PolyZ::one(f).sub(&PolyZ::monomial(inv_p.pow(e as u64), e * dp));
    let rhs = factor.pow((cf.degree() / e) as u64);
    Ok(EulerFactorCheck { p: p.clone(), order: e, lhs, rhs })
}

/// `det L(φ/O_E; 1; z)` against the Euler product of `ζ_{O_E}`.
#[derive(Clone, Debug)]
pub struct DetIdentityReport {
    pub lhs: PolyZ,
    pub rhs: PolyZ,
    pub equal: bool,
    /// The identity is proven only for `E = K` here; otherwise the comparison is exploratory.
    pub proven_scope: bool,
    pub ramified: Vec<UPoly>,
}

pub fn det_identity_report(cf: &CycField, dmax: usize) -> Result<DetIdentityReport> {
    let f = cf.field();
    let strata = group_zseries(cf, 1, dmax)?;
    let lhs = det_truncated(&operator_matrix(cf, &strata)?, dmax);
    let rhs = PolyZ::new(f, euler_product_zeta(cf, 1, dmax)?);
    Ok(DetIdentityReport {
        equal: lhs == rhs,
        lhs,
        rhs,
        proven_scope: cf.is_trivial(),
        ramified: cf.primes().to_vec(),
    })
}

/// Product of group-ring series truncated at `z^D`.
pub fn group_series_mul(cf: &CycField, a: &[Vec<RatFn>], b: &[Vec<RatFn>], dmax: usize) -> Vec<Vec<RatFn>> {
    let f = cf.field();
    let mut out = vec![vec![RatFn::zero(f); cf.group_order()]; dmax + 1];
    for (d1, x) in a.iter().enumerate() {
        for (d2, y) in b.iter().enumerate() {
            if d1 + d2 > dmax {
                continue;
            }
            for (g, u) in x.iter().enumerate() {
                if u.is_zero() {
                    continue;
                }
                for (h, v) in y.iter().enumerate() {
                    if !v.is_zero() {
                        let k = cf.group_mul(g, h);
                        out[d1 + d2][k] = out[d1 + d2][k].add(&u.mul(v));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(f: &Fq, s: &str) -> UPoly {
        UPoly::parse(f, s, "T").unwrap()
    }

    #[test]
    fn euler_factor_examples() {
        let f3 = Fq::new(3, 1).unwrap();
        let e = CycField::new(&f3, &[up(&f3, "T")]).unwrap();
        for s in ["T+1", "T^2+1", "T+2"] {
            let c = euler_factor_det_check(&e, &up(&f3, s)).unwrap();
            assert!(c.holds(), "{s}");
        }
        let c = euler_factor_det_check(&e, &up(&f3, "T+1")).unwrap();
        assert_eq!(c.order, 1);
        assert!(euler_factor_det_check(&e, &up(&f3, "T")).is_err());
        let k = CycField::trivial(&f3);
        let c = euler_factor_det_check(&k, &up(&f3, "T^2+1")).unwrap();
        assert_eq!(c.lhs.to_text(), "1+(2)/(T^2+1)*z^2");
    }

    #[test]
    fn sign_action_matrix() {
        let f3 = Fq::new(3, 1).unwrap();
        let e = CycField::new(&f3, &[up(&f3, "T")]).unwrap();
        let two = e.group_of(&up(&f3, "2")).unwrap();
        let c = RatFn::parse(&f3, "1/(T+2)", "T").unwrap();
        let mut strata = vec![vec![RatFn::zero(&f3); 2]; 2];
        strata[1][two] = c.clone();
        let m = operator_matrix(&e, &strata).unwrap();
        assert_eq!(m.entries[0][0], PolyZ::monomial(c.clone(), 1));
        assert_eq!(m.entries[1][1], PolyZ::monomial(c.neg(), 1));
        assert!(m.entries[0][1].is_zero() && m.entries[1][0].is_zero());
        assert_eq!(det(&m), PolyZ::monomial(c.mul(&c).neg(), 2));
    }

    #[test]
    fn trivial_extension_identity() {
        for p in [2u64, 3] {
            let f = Fq::new(p, 1).unwrap();
            let r = det_identity_report(&CycField::trivial(&f), 4).unwrap();
            assert!(r.equal && r.proven_scope);
        }
    }
}
