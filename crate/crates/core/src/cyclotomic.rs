//! Cyclotomic function fields `E = K(λ_{P_1}, …, λ_{P_n})` built from Carlitz torsion.

use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::field::{Elem, Fq};
use crate::ratfn::RatFn;
use crate::residue::ResidueField;
use crate::ring::{KAlgebra, Ring};
use crate::upoly::UPoly;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

/// Default bound on `|G| = [E:K]`.
pub const GROUP_BOUND: u64 = 256;

/// One-variable images `λ_j^e`, `e < n_j`, each a reduced coordinate vector.
type PowerTable = Vec<Vec<Vec<RatFn>>>;

struct CycData {
    f: Fq,
    dm: DrinfeldModule,
    primes: Vec<UPoly>,
    n: Vec<usize>,
    torsion: Vec<Vec<UPoly>>,
    strides: Vec<usize>,
    dim: usize,
    units: Vec<Vec<UPoly>>,
    unit_mul: Vec<Vec<Vec<usize>>>,
    gal: Vec<Vec<Vec<Vec<RatFn>>>>,
    twists: RwLock<HashMap<u32, Arc<PowerTable>>>,
}

/// `E = K(λ_{P_1}, …, λ_{P_n})` with the A-basis of monomials `Π λ_j^{i_j}`, `i_j < q^{deg P_j} − 1`.
#[derive(Clone)]
pub struct CycField(Arc<CycData>);

impl PartialEq for CycField {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || (self.0.f == o.0.f && self.0.primes == o.0.primes)
    }
}

impl fmt::Debug for CycField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.0.primes.iter().map(|p| p.to_text("T")).collect();
        write!(f, "K(lambda_[{}])", ps.join(","))
    }
}

/// Reduce a one-variable coordinate vector modulo the monic `g` (coefficients in A).
fn reduce_1(mut c: Vec<RatFn>, g: &[UPoly], zero: &RatFn) -> Vec<RatFn> {
    let n = g.len() - 1;
    for e in (n..c.len()).rev() {
        let top = std::mem::replace(&mut c[e], zero.clone());
        if top.is_zero() {
            continue;
        }
        for (t, gt) in g.iter().enumerate().take(n) {
            if !gt.is_zero() {
                c[e - n + t] = c[e - n + t].sub(&top.mul_poly(gt));
            }
        }
    }
    c.resize(n, zero.clone());
    c
}

fn mul_1(a: &[RatFn], b: &[RatFn], g: &[UPoly], zero: &RatFn) -> Vec<RatFn> {
    let mut c = vec![zero.clone(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                c[i + j] = c[i + j].add(&x.mul(y));
            }
        }
    }
    reduce_1(c, g, zero)
}

fn powers_1(x: &[RatFn], n: usize, g: &[UPoly], zero: &RatFn) -> Vec<Vec<RatFn>> {
    let mut one = vec![zero.clone(); n];
    one[0] = RatFn::one(zero.field());
    let mut out = vec![one];
    for e in 1..n {
        out.push(mul_1(&out[e - 1], x, g, zero));
    }
    out
}

fn residue_digits(f: &Fq, d: usize, mut t: u64) -> UPoly {
    let q = f.q() as u64;
    let mut c = Vec::with_capacity(d);
    for _ in 0..d {
        c.push((t % q) as Elem);
        t /= q;
    }
    UPoly::from_coeffs(f, c)
}

fn residue_index(f: &Fq, r: &UPoly) -> u64 {
    let q = f.q() as u64;
    r.coeffs().iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
}

impl CycField {
    /// `K` itself.
    pub fn trivial(f: &Fq) -> CycField {
        CycField::new(f, &[]).expect("trivial extension")
    }

    pub fn new(f: &Fq, primes: &[UPoly]) -> Result<CycField> {
        CycField::with_bound(f, primes, GROUP_BOUND)
    }

    pub fn with_bound(f: &Fq, primes: &[UPoly], bound: u64) -> Result<CycField> {
        let dm = DrinfeldModule::carlitz(f);
        let mut seen = BTreeSet::new();
        let q = f.q() as u64;
        let mut order = 1u64;
        for p in primes {
            if !seen.insert(p.coeffs().to_vec()) {
                return Err(Error::DuplicatePrime(p.to_text("T")));
            }
            if !p.is_monic() {
                return Err(Error::NotMonic(p.to_text("T")));
            }
            if !p.is_irreducible() {
                return Err(Error::NotIrreducible(p.to_text("T")));
            }
            order = order.saturating_mul(q.saturating_pow(p.deg() as u32) - 1);
            if order > bound {
                return Err(Error::GroupTooLarge { order, bound });
            }
        }
        let zero = RatFn::zero(f);
        let degs: Vec<usize> = primes.iter().map(|p| p.deg() as usize).collect();
        let n: Vec<usize> = degs.iter().map(|&d| (q.pow(d as u32) - 1) as usize).collect();
        let torsion: Vec<Vec<UPoly>> = primes.iter().map(|p| dm.torsion_poly(p).expect("checked").coeffs).collect();
        let mut strides = Vec::with_capacity(n.len());
        let mut dim = 1usize;
        for &nj in &n {
            strides.push(dim);
            dim *= nj;
        }
        let mut units = Vec::new();
        let mut unit_mul = Vec::new();
        let mut gal = Vec::new();
        for (j, p) in primes.iter().enumerate() {
            let u: Vec<UPoly> = (1..=n[j] as u64).map(|t| residue_digits(f, degs[j], t)).collect();
            let table: Vec<Vec<usize>> = u
                .iter()
                .map(|a| u.iter().map(|b| residue_index(f, &a.mul(b).rem(p)) as usize - 1).collect())
                .collect();
            let imgs: Vec<Vec<Vec<RatFn>>> = u
                .iter()
                .map(|a| {
                    let phi = dm.phi_of_poly(a);
                    let mut c = vec![zero.clone(); q.pow(phi.len() as u32 - 1) as usize + 1];
                    for (k, ck) in phi.iter().enumerate() {
                        c[q.pow(k as u32) as usize] = RatFn::from_poly(ck.clone());
                    }
                    let img = reduce_1(c, &torsion[j], &zero);
                    powers_1(&img, n[j], &torsion[j], &zero)
                })
                .collect();
            units.push(u);
            unit_mul.push(table);
            gal.push(imgs);
        }
        Ok(CycField(Arc::new(CycData {
            f: f.clone(),
            dm,
            primes: primes.to_vec(),
            n,
            torsion,
            strides,
            dim,
            units,
            unit_mul,
            gal,
            twists: RwLock::new(HashMap::new()),
        })))
    }

    pub fn field(&self) -> &Fq {
        &self.0.f
    }

    pub fn module(&self) -> &DrinfeldModule {
        &self.0.dm
    }

    pub fn primes(&self) -> &[UPoly] {
        &self.0.primes
    }

    pub fn is_trivial(&self) -> bool {
        self.0.dim == 1
    }

    /// `[E:K]`, which is also `|G|`.
    pub fn degree(&self) -> usize {
        self.0.dim
    }

    pub fn group_order(&self) -> usize {
        self.0.dim
    }

    /// Coefficients of `G_{P_j}(X)`.
    pub fn torsion_poly(&self, j: usize) -> &[UPoly] {
        &self.0.torsion[j]
    }

    /// Exponent vector of the i-th basis monomial.
    pub fn exponents(&self, idx: usize) -> Vec<usize> {
        self.0.n.iter().zip(&self.0.strides).map(|(&nj, &s)| (idx / s) % nj).collect()
    }

    pub fn index_of(&self, exps: &[usize]) -> usize {
        exps.iter().zip(&self.0.strides).map(|(e, s)| e * s).sum()
    }

    pub fn zero(&self) -> CycElem {
        CycElem { cf: self.clone(), c: vec![RatFn::zero(&self.0.f); self.0.dim] }
    }

    pub fn one(&self) -> CycElem {
        self.from_k(&RatFn::one(&self.0.f))
    }

    pub fn from_k(&self, x: &RatFn) -> CycElem {
        let mut z = self.zero();
        z.c[0] = x.clone();
        z
    }

    /// `λ_j`, which is `−θ` when `q^{deg P_j} = 2`.
    pub fn lambda(&self, j: usize) -> CycElem {
        let f = &self.0.f;
        let zero = RatFn::zero(f);
        let mut c = vec![zero.clone(); 2];
        c[1] = RatFn::one(f);
        let v = reduce_1(c, &self.0.torsion[j], &zero);
        self.embed_1(j, &v)
    }

    fn embed_1(&self, j: usize, v: &[RatFn]) -> CycElem {
        let mut z = self.zero();
        for (e, x) in v.iter().enumerate() {
            z.c[e * self.0.strides[j]] = x.clone();
        }
        z
    }

    pub fn from_coords(&self, c: Vec<RatFn>) -> Result<CycElem> {
        if c.len() != self.0.dim {
            return Err(Error::Mismatch);
        }
        Ok(CycElem { cf: self.clone(), c })
    }

    /// Image of `x` under the map fixed by one-variable images of each `λ_j^e`.
    fn apply_images(&self, x: &CycElem, images: &[&Vec<Vec<RatFn>>], twist: u32) -> CycElem {
        let d = &self.0;
        let mut out = vec![RatFn::zero(&d.f); d.dim];
        for (idx, c) in x.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.twist(twist);
            let exps = self.exponents(idx);
            // Tensor product of the component images.
            let mut acc: Vec<(usize, RatFn)> = vec![(0, c)];
            for (j, &e) in exps.iter().enumerate() {
                let img = &images[j][e];
                let mut next = Vec::new();
                for (pos, v) in &acc {
                    for (t, w) in img.iter().enumerate() {
                        if !w.is_zero() {
                            next.push((pos + t * d.strides[j], v.mul(w)));
                        }
                    }
                }
                acc = next;
            }
            for (pos, v) in acc {
                out[pos] = out[pos].add(&v);
            }
        }
        CycElem { cf: self.clone(), c: out }
    }

    fn twist_table(&self, i: u32) -> Arc<PowerTable> {
        if let Some(t) = self.0.twists.read().expect("twist cache").get(&i) {
            return t.clone();
        }
        let d = &self.0;
        let zero = RatFn::zero(&d.f);
        let qi = (d.f.q() as u64).pow(i);
        let table: PowerTable = (0..d.primes.len())
            .map(|j| {
                let g = &d.torsion[j];
                let mut lam = vec![zero.clone(); 2];
                lam[1] = RatFn::one(&d.f);
                let lam = reduce_1(lam, g, &zero);
                let mut r = powers_1(&lam, 1, g, &zero).remove(0);
                let mut b = lam;
                let mut e = qi;
                while e > 0 {
                    if e & 1 == 1 {
                        r = mul_1(&r, &b, g, &zero);
                    }
                    e >>= 1;
                    if e > 0 {
                        b = mul_1(&b, &b, g, &zero);
                    }
                }
                powers_1(&r, d.n[j], g, &zero)
            })
            .collect();
        let t = Arc::new(table);
        self.0.twists.write().expect("twist cache").insert(i, t.clone());
        t
    }

    // Group G = Π_j (A/P_j)^×, element index in mixed radix over unit indices.

    /// Unit-index tuple of a group element.
    pub fn group_tuple(&self, g: usize) -> Vec<usize> {
        self.exponents(g)
    }

    pub fn group_index(&self, tuple: &[usize]) -> usize {
        self.index_of(tuple)
    }

    pub fn group_identity(&self) -> usize {
        0
    }

    pub fn group_mul(&self, a: usize, b: usize) -> usize {
        let (ta, tb) = (self.group_tuple(a), self.group_tuple(b));
        let t: Vec<usize> = (0..ta.len()).map(|j| self.0.unit_mul[j][ta[j]][tb[j]]).collect();
        self.group_index(&t)
    }

    pub fn group_order_of(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.group_mul(x, g);
            k += 1;
        }
        k
    }

    /// Residues `(a_1 mod P_1, …)` of a group element.
    pub fn group_residues(&self, g: usize) -> Vec<UPoly> {
        self.group_tuple(g).iter().enumerate().map(|(j, &u)| self.0.units[j][u].clone()).collect()
    }

    /// Group element of an `a` prime to every `P_j`.
    pub fn group_of(&self, a: &UPoly) -> Option<usize> {
        let mut t = Vec::with_capacity(self.0.primes.len());
        for p in &self.0.primes {
            let r = a.rem(p);
            if r.is_zero() {
                return None;
            }
            t.push(residue_index(&self.0.f, &r) as usize - 1);
        }
        Some(self.group_index(&t))
    }

    pub fn group_text(&self, g: usize) -> String {
        let r: Vec<String> = self.group_residues(g).iter().map(|x| x.to_text("T")).collect();
        format!("({})", r.join(","))
    }

    /// `σ_g(x)`: each `λ_j ↦ φ_{a_j}(λ_j)`.
    pub fn galois_act(&self, g: usize, x: &CycElem) -> Result<CycElem> {
        if x.cf != *self {
            return Err(Error::Mismatch);
        }
        let t = self.group_tuple(g);
        let imgs: Vec<&Vec<Vec<RatFn>>> = t.iter().enumerate().map(|(j, &u)| &self.0.gal[j][u]).collect();
        Ok(self.apply_images(x, &imgs, 0))
    }

    /// Key of the symbol of a monic `a`: per component the unit index, or `n_j` when `P_j | a`.
    pub fn symbol_key(&self, a: &UPoly) -> usize {
        let mut key = 0usize;
        let mut stride = 1usize;
        for (j, p) in self.0.primes.iter().enumerate() {
            let r = a.rem(p);
            let v = if r.is_zero() { self.0.n[j] } else { residue_index(&self.0.f, &r) as usize - 1 };
            key += v * stride;
            stride *= self.0.n[j] + 1;
        }
        key
    }

    pub fn symbol_key_count(&self) -> usize {
        self.0.n.iter().map(|n| n + 1).product()
    }

    /// Group-ring element attached to a symbol key.
    pub fn symbol_of_key(&self, key: usize) -> GroupRingElem {
        let d = &self.0;
        let f = &d.f;
        let mut k = key;
        let mut comp = Vec::with_capacity(d.n.len());
        for &nj in &d.n {
            comp.push(k % (nj + 1));
            k /= nj + 1;
        }
        let mut coeff = f.from_int(1);
        for (j, &c) in comp.iter().enumerate() {
            if c == d.n[j] {
                // Average over the inertia group: |I_j|^{-1} Σ_{u ∈ I_j} u.
                coeff = f.mul(coeff, f.inv(f.from_int(d.n[j] as i64)));
            }
        }
        let mut out = vec![0 as Elem; d.dim];
        for (g, slot) in out.iter_mut().enumerate() {
            let t = self.group_tuple(g);
            if t.iter().zip(&comp).enumerate().all(|(j, (&tj, &cj))| cj == d.n[j] || tj == cj) {
                *slot = coeff;
            }
        }
        GroupRingElem { f: f.clone(), c: out }
    }

    /// `σ_{a,O_E}` for a monic `a`, extended multiplicatively from primes.
    pub fn symbol(&self, a: &UPoly) -> GroupRingElem {
        self.symbol_of_key(self.symbol_key(a))
    }

    /// `σ_{Q,O_E}` for a monic irreducible `Q`.
    pub fn frobenius_symbol(&self, q: &UPoly) -> Result<GroupRingElem> {
        if !q.is_monic() {
            return Err(Error::NotMonic(q.to_text("T")));
        }
        if !q.is_irreducible() {
            return Err(Error::NotIrreducible(q.to_text("T")));
        }
        Ok(self.symbol(q))
    }

    /// Whether `Q` is one of the `P_j`.
    pub fn is_ramified(&self, q: &UPoly) -> bool {
        self.0.primes.contains(q)
    }

    /// `(e, f, g)` for a monic irreducible `Q`.
    pub fn prime_splitting(&self, q: &UPoly) -> Result<Splitting> {
        if !q.is_monic() {
            return Err(Error::NotMonic(q.to_text("T")));
        }
        if !q.is_irreducible() {
            return Err(Error::NotIrreducible(q.to_text("T")));
        }
        let d = &self.0;
        let mut e = 1usize;
        let mut t = Vec::with_capacity(d.primes.len());
        for (j, p) in d.primes.iter().enumerate() {
            if p == q {
                e *= d.n[j];
                t.push(0);
            } else {
                t.push(residue_index(&d.f, &q.rem(p)) as usize - 1);
            }
        }
        let f = self.group_order_of(self.group_index(&t));
        let g = d.dim / (e * f);
        Ok(Splitting { e, f, g })
    }

    /// Primes of `O_E` above `Q`, found as Frobenius orbits of images of `(λ_1, …, λ_n)`
    /// in a residue field of degree `f·deg Q`.
    pub fn primes_above(&self, q: &UPoly) -> Result<Vec<PrimeAbove>> {
        let s = self.prime_splitting(q)?;
        let d = &self.0;
        let m = q.deg() as usize * s.f;
        let res = ResidueField::new(&d.f, m, q);
        let mut root_sets: Vec<Vec<UPoly>> = Vec::new();
        for g in &d.torsion {
            let gbar: Vec<UPoly> = g.iter().map(|c| res.eval(c, res.theta_bar())).collect();
            let roots: Vec<UPoly> = res
                .elements()
                .filter(|y| {
                    let mut acc = UPoly::zero(&d.f);
                    for c in gbar.iter().rev() {
                        acc = res.mul(&acc, y).add(c);
                    }
                    acc.is_zero()
                })
                .collect();
            root_sets.push(roots);
        }
        let mut tuples: Vec<Vec<UPoly>> = vec![Vec::new()];
        for roots in &root_sets {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    roots.iter().map(move |r| {
                        let mut t = t.clone();
                        t.push(r.clone());
                        t
                    })
                })
                .collect();
        }
        let dq = q.deg() as u32;
        let mut seen: BTreeSet<Vec<Vec<Elem>>> = BTreeSet::new();
        let mut out = Vec::new();
        for t in tuples {
            let key: Vec<Vec<Elem>> = t.iter().map(|x| x.coeffs().to_vec()).collect();
            if seen.contains(&key) {
                continue;
            }
            let mut orbit = 0;
            let mut cur = t.clone();
            loop {
                let k: Vec<Vec<Elem>> = cur.iter().map(|x| x.coeffs().to_vec()).collect();
                if !seen.insert(k) {
                    break;
                }
                orbit += 1;
                cur = cur.iter().map(|x| res.frob(x, dq)).collect();
            }
            out.push(PrimeAbove { q: q.clone(), residue: res.clone(), lambda_images: t, orbit });
        }
        Ok(out)
    }
}

/// Ramification index, residue degree and number of primes above a prime of A.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub e: usize,
    pub f: usize,
    pub g: usize,
}

/// A prime 𝔓 of `O_E` with its residue field `O_E/𝔓`.
#[derive(Clone, Debug)]
pub struct PrimeAbove {
    pub q: UPoly,
    pub residue: ResidueField,
    pub lambda_images: Vec<UPoly>,
    /// Size of the Frobenius orbit of the λ-images, equal to the residue degree.
    pub orbit: usize,
}

/// Element of `F_p[G]`, dense over the group enumeration of a [`CycField`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElem {
    f: Fq,
    c: Vec<Elem>,
}

impl GroupRingElem {
    pub fn coeffs(&self) -> &[Elem] {
        &self.c
    }

    pub fn basis(cf: &CycField, g: usize) -> GroupRingElem {
        let mut c = vec![0; cf.group_order()];
        c[g] = 1;
        GroupRingElem { f: cf.field().clone(), c }
    }

    pub fn mul(&self, o: &GroupRingElem, cf: &CycField) -> GroupRingElem {
        let mut c = vec![0; self.c.len()];
        for (a, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (b, &y) in o.c.iter().enumerate() {
                if y != 0 {
                    let g = cf.group_mul(a, b);
                    c[g] = self.f.add(c[g], self.f.mul(x, y));
                }
            }
        }
        GroupRingElem { f: self.f.clone(), c }
    }

    /// `Σ_g c_g σ_g(x)`.
    pub fn act(&self, cf: &CycField, x: &CycElem) -> Result<CycElem> {
        let mut acc = cf.zero();
        for (g, &c) in self.c.iter().enumerate() {
            if c != 0 {
                acc = acc.add(&cf.galois_act(g, x)?.scale_elem(c));
            }
        }
        Ok(acc)
    }

    pub fn to_text(&self, cf: &CycField) -> String {
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(g, &c)| {
                let s = self.f.elem_text(c);
                if c == 1 {
                    format!("[{}]", cf.group_text(g))
                } else {
                    format!("{s}*[{}]", cf.group_text(g))
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

/// Element of `E`, coordinates over K in the monomial basis.
#[derive(Clone)]
pub struct CycElem {
    cf: CycField,
    c: Vec<RatFn>,
}

impl PartialEq for CycElem {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl fmt::Debug for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl CycElem {
    pub fn cyc(&self) -> &CycField {
        &self.cf
    }

    pub fn coords(&self) -> &[RatFn] {
        &self.c
    }

    /// The K-value, if this element lies in K.
    pub fn as_k(&self) -> Option<&RatFn> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    /// Membership in `O_E = A[λ_1, …, λ_n]`.
    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|x| x.is_integral())
    }

    pub fn scale_elem(&self, a: Elem) -> CycElem {
        CycElem { cf: self.cf.clone(), c: self.c.iter().map(|x| x.scale_elem(a)).collect() }
    }

    pub fn tidy(&self) -> CycElem {
        CycElem { cf: self.cf.clone(), c: self.c.iter().map(|x| x.tidy()).collect() }
    }

    pub fn to_text(&self) -> String {
        let names: Vec<String> = if self.cf.0.primes.len() == 1 {
            vec!["L".into()]
        } else {
            (1..=self.cf.0.primes.len()).map(|j| format!("L{j}")).collect()
        };
        let mut parts = Vec::new();
        for idx in (0..self.c.len()).rev() {
            let x = &self.c[idx];
            if x.is_zero() {
                continue;
            }
            let mono: Vec<String> = self
                .cf
                .exponents(idx)
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| if e == 1 { names[j].clone() } else { format!("{}^{}", names[j], e) })
                .collect();
            let xs = x.to_text("T");
            let xs = if xs.contains('+') || xs.contains('/') { format!("({xs})") } else { xs };
            parts.push(match (mono.is_empty(), x.is_one()) {
                (true, _) => xs,
                (false, true) => mono.join("*"),
                (false, false) => format!("{xs}*{}", mono.join("*")),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

impl Ring for CycElem {
    fn q(&self) -> u64 {
        self.cf.0.f.q() as u64
    }
    fn zero_like(&self) -> Self {
        self.cf.zero()
    }
    fn one_like(&self) -> Self {
        self.cf.one()
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
    fn add(&self, o: &Self) -> Self {
        CycElem { cf: self.cf.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a.add(b)).collect() }
    }
    fn neg(&self) -> Self {
        CycElem { cf: self.cf.clone(), c: self.c.iter().map(|a| a.neg()).collect() }
    }
    fn mul(&self, o: &Self) -> Self {
        let d = &self.cf.0;
        if d.dim == 1 {
            return CycElem { cf: self.cf.clone(), c: vec![self.c[0].mul(&o.c[0])] };
        }
        // Product in the box of exponents < 2 n_j − 1, then reduce each axis.
        let ext: Vec<usize> = d.n.iter().map(|&n| 2 * n - 1).collect();
        let mut es = Vec::with_capacity(ext.len());
        let mut size = 1;
        for &e in &ext {
            es.push(size);
            size *= e;
        }
        let zero = RatFn::zero(&d.f);
        let mut buf = vec![zero.clone(); size];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ei = self.cf.exponents(i);
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ej = self.cf.exponents(j);
                let pos: usize = ei.iter().zip(&ej).zip(&es).map(|((x, y), s)| (x + y) * s).sum();
                buf[pos] = buf[pos].add(&a.mul(b));
            }
        }
        for (axis, &n) in d.n.iter().enumerate() {
            let g = &d.torsion[axis];
            let s = es[axis];
            for pos in 0..size {
                let e = (pos / s) % ext[axis];
                if e != ext[axis] - 1 {
                    continue;
                }
                // `pos` is the top of a line along this axis; divide that line by G.
                let base = pos - e * s;
                for k in (n..ext[axis]).rev() {
                    let top = std::mem::replace(&mut buf[base + k * s], zero.clone());
                    if top.is_zero() {
                        continue;
                    }
                    for (t, gt) in g.iter().enumerate().take(n) {
                        if !gt.is_zero() {
                            let at = base + (k - n + t) * s;
                            buf[at] = buf[at].sub(&top.mul_poly(gt));
                        }
                    }
                }
            }
        }
        let mut out = vec![zero; d.dim];
        for (pos, x) in buf.into_iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let exps: Vec<usize> = ext.iter().zip(&es).map(|(&e, &s)| (pos / s) % e).collect();
            out[self.cf.index_of(&exps)] = x;
        }
        CycElem { cf: self.cf.clone(), c: out }
    }
    fn twist(&self, i: u32) -> Self {
        if i == 0 {
            return self.clone();
        }
        if self.cf.0.dim == 1 {
            return CycElem { cf: self.cf.clone(), c: vec![self.c[0].twist(i)] };
        }
        let table = self.cf.twist_table(i);
        let imgs: Vec<&Vec<Vec<RatFn>>> = table.iter().collect();
        self.cf.apply_images(self, &imgs, i)
    }
}

impl KAlgebra for CycElem {
    fn scale(&self, c: &RatFn) -> Self {
        CycElem { cf: self.cf.clone(), c: self.c.iter().map(|x| x.mul(c)).collect() }
    }
    fn from_k(&self, c: &RatFn) -> Self {
        self.cf.from_k(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(f: &Fq, s: &str) -> UPoly {
        UPoly::parse(f, s, "T").unwrap()
    }

    #[test]
    fn construction_examples() {
        let f3 = Fq::new(3, 1).unwrap();
        let e = CycField::new(&f3, &[up(&f3, "T")]).unwrap();
        assert_eq!(e.degree(), 2);
        let l = e.lambda(0);
        assert_eq!(l.mul(&l).as_k().unwrap(), &RatFn::theta(&f3).neg());
        let f2 = Fq::new(2, 1).unwrap();
        let k = CycField::new(&f2, &[up(&f2, "T")]).unwrap();
        assert_eq!(k.degree(), 1);
        assert_eq!(k.lambda(0).as_k().unwrap(), &RatFn::theta(&f2));
        let two = CycField::new(&f3, &[up(&f3, "T"), up(&f3, "T+1")]).unwrap();
        assert_eq!(two.degree(), 4);
        assert!((0..4).all(|g| two.group_order_of(g) <= 2));
        assert!(CycField::new(&f3, &[up(&f3, "T"), up(&f3, "T")]).is_err());
        assert!(CycField::new(&f3, &[up(&f3, "T^2+2")]).is_err());
    }

    #[test]
    fn galois_examples() {
        let f3 = Fq::new(3, 1).unwrap();
        let e = CycField::new(&f3, &[up(&f3, "T")]).unwrap();
        let l = e.lambda(0);
        let two = e.group_of(&UPoly::constant(&f3, 2)).unwrap();
        assert_eq!(e.galois_act(two, &l).unwrap(), l.neg());
        let l2 = l.mul(&l);
        assert_eq!(e.galois_act(two, &l2).unwrap(), l2);
        assert_eq!(e.galois_act(0, &l).unwrap(), l);
    }

    #[test]
    fn symbol_examples() {
        let f3 = Fq::new(3, 1).unwrap();
        let e = CycField::new(&f3, &[up(&f3, "T")]).unwrap();
        assert_eq!(e.frobenius_symbol(&up(&f3, "T+1")).unwrap(), GroupRingElem::basis(&e, 0));
        let s = e.frobenius_symbol(&up(&f3, "T")).unwrap();
        assert_eq!(s.coeffs(), &[2, 2]);
        assert_eq!(s.act(&e, &e.lambda(0)).unwrap(), e.zero());
        let k = CycField::trivial(&f3);
        assert_eq!(k.frobenius_symbol(&up(&f3, "T")).unwrap().coeffs(), &[1]);
    }

    #[test]
    fn splitting_examples() {
        let f3 = Fq::new(3, 1).unwrap();
        let e = CycField::new(&f3, &[up(&f3, "T")]).unwrap();
        assert_eq!(e.prime_splitting(&up(&f3, "T+1")).unwrap(), Splitting { e: 1, f: 1, g: 2 });
        assert_eq!(e.prime_splitting(&up(&f3, "T")).unwrap(), Splitting { e: 2, f: 1, g: 1 });
        assert_eq!(e.prime_splitting(&up(&f3, "T^2+1")).unwrap(), Splitting { e: 1, f: 1, g: 2 });
        assert_eq!(e.prime_splitting(&up(&f3, "T+2")).unwrap(), Splitting { e: 1, f: 2, g: 1 });
    }

    #[test]
    fn primes_above_match_splitting() {
        let f3 = Fq::new(3, 1).unwrap();
        let e = CycField::new(&f3, &[up(&f3, "T")]).unwrap();
        for d in 1..=2 {
            for q in UPoly::irreducibles(&f3, d) {
                let s = e.prime_splitting(&q).unwrap();
                let ps = e.primes_above(&q).unwrap();
                assert_eq!(ps.len(), s.g, "{q:?}");
                assert!(ps.iter().all(|p| p.orbit == s.f));
            }
        }
    }

    #[test]
    fn twist_is_q_power() {
        let f3 = Fq::new(3, 1).unwrap();
        let e = CycField::new(&f3, &[up(&f3, "T^2+1")]).unwrap();
        let x = e.lambda(0).add(&e.one().scale(&RatFn::theta(&f3)));
        let cube = x.mul(&x).mul(&x);
        assert_eq!(x.twist(1), cube);
        assert_eq!(x.twist(2), cube.mul(&cube).mul(&cube));
    }
}
