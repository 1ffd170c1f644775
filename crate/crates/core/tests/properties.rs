use carlitz_lab::cyclotomic::CycField;
use carlitz_lab::detzeta::{det, group_series_mul, operator_matrix, OperatorMatrix, PolyZ};
use carlitz_lab::drinfeld::DrinfeldModule;
use carlitz_lab::logalg::{special_polynomial, DEFAULT_WINDOW};
use carlitz_lab::lseries::{parse_payload, pellarin_stratum, stratum_sum};
use carlitz_lab::shtuka::{random_ws1, WsElem};
use carlitz_lab::{Fq, KAlgebra, LaurentApprox, MPoly, OrePoly, RatFn, Ring, UPoly};
use proptest::prelude::*;
use rand::SeedableRng;

fn fq(p: u64) -> Fq {
    Fq::new(p, 1).unwrap()
}

fn poly(f: &Fq, c: &[u32]) -> UPoly {
    UPoly::from_coeffs(f, c.iter().map(|x| x % f.q()).collect())
}

fn monic(f: &Fq, c: &[u32]) -> UPoly {
    let mut v: Vec<u32> = c.iter().map(|x| x % f.q()).collect();
    v.push(1);
    UPoly::from_coeffs(f, v)
}

fn ratfn(f: &Fq, num: &[u32], den: &[u32]) -> RatFn {
    RatFn::new(poly(f, num), monic(f, den)).unwrap()
}

fn coeffs(n: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..81, 0..=n)
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3])
}

#[test]
fn frobenius_fixes_small_fields() {
    for (p, d) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1), (3, 4)] {
        let f = Fq::new(p, d).unwrap();
        for a in f.elements() {
            assert_eq!(f.pow(a, f.q() as u64), a);
        }
    }
}

#[test]
fn galois_orbit_of_lambda_is_the_torsion() {
    for (p, pp) in [(3u64, "T"), (3, "T+1"), (2, "T^2+T+1"), (2, "T^3+T+1"), (3, "T^2+1")] {
        let f = fq(p);
        let m = UPoly::parse(&f, pp, "T").unwrap();
        let cf = CycField::new(&f, std::slice::from_ref(&m)).unwrap();
        let phi = DrinfeldModule::carlitz(&f).phi_of(&m);
        let lam = cf.lambda(0);
        let mut images = Vec::new();
        for g in 0..cf.group_order() {
            let x = cf.galois_act(g, &lam).unwrap();
            assert!(phi.apply_k(&x).is_zero(), "{pp}");
            assert!(!x.is_zero());
            assert!(!images.contains(&x));
            images.push(x);
        }
        let nonzero_roots = (f.q() as usize).pow(m.deg() as u32) - 1;
        assert_eq!(images.len(), nonzero_roots);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratfn_agrees_with_upoly(p in prime(), a in coeffs(5), b in coeffs(5)) {
        let f = fq(p);
        let (x, y) = (poly(&f, &a), poly(&f, &b));
        let (rx, ry) = (RatFn::from_poly(x.clone()), RatFn::from_poly(y.clone()));
        prop_assert_eq!(rx.add(&ry), RatFn::from_poly(x.add(&y)));
        prop_assert_eq!(rx.mul(&ry), RatFn::from_poly(x.mul(&y)));
        prop_assert_eq!(rx.sub(&ry).as_poly(), Some(x.sub(&y)));
    }

    #[test]
    fn twist_is_a_ring_homomorphism(p in prime(), a in coeffs(3), b in coeffs(2), c in coeffs(3), d in coeffs(2), i in 0u32..3) {
        let f = fq(p);
        let (x, y) = (ratfn(&f, &a, &b), ratfn(&f, &c, &d));
        prop_assert_eq!(x.add(&y).twist(i), x.twist(i).add(&y.twist(i)));
        prop_assert_eq!(x.mul(&y).twist(i), x.twist(i).mul(&y.twist(i)));
        prop_assert_eq!(x.twist(i), x.pow((f.q() as u64).pow(i)));
    }

    #[test]
    fn valuation_is_additive(p in prime(), a in coeffs(4), b in coeffs(3), c in coeffs(4), d in coeffs(3)) {
        let f = fq(p);
        let (x, y) = (ratfn(&f, &a, &b), ratfn(&f, &c, &d));
        prop_assume!(!x.is_zero() && !y.is_zero());
        prop_assert_eq!(x.mul(&y).v_inf().unwrap(), x.v_inf().unwrap() + y.v_inf().unwrap());
    }

    #[test]
    fn laurent_product_precision(p in prime(), a in coeffs(4), b in coeffs(3), c in coeffs(4), d in coeffs(3), n in 2i64..12) {
        let f = fq(p);
        let (x, y) = (ratfn(&f, &a, &b), ratfn(&f, &c, &d));
        let prod = LaurentApprox::from_ratfn(&x, n).mul(&LaurentApprox::from_ratfn(&y, n));
        prop_assert_eq!(prod.clone(), LaurentApprox::from_ratfn(&x.mul(&y), prod.precision()));
    }

    #[test]
    fn ore_multiplication_laws(p in prime(), a in coeffs(2), b in coeffs(2), c in coeffs(2), x in coeffs(3)) {
        let f = fq(p);
        let zero = RatFn::zero(&f);
        let ore = |v: &[u32]| OrePoly::new(&zero, v.iter().map(|&k| RatFn::from_poly(UPoly::monomial(&f, k % f.q(), (k / 7) as usize))).collect());
        let (oa, ob, oc) = (ore(&a), ore(&b), ore(&c));
        prop_assert_eq!(oa.mul(&ob).mul(&oc), oa.mul(&ob.mul(&oc)));
        prop_assert_eq!(oa.mul(&ob.add(&oc)), oa.mul(&ob).add(&oa.mul(&oc)));
        let xv = RatFn::from_poly(poly(&f, &x));
        prop_assert_eq!(oa.mul(&ob).apply(&xv), oa.apply(&ob.apply(&xv)));
    }

    #[test]
    fn phi_is_multiplicative(p in prime(), a in coeffs(2), b in coeffs(2)) {
        let f = fq(p);
        let c = DrinfeldModule::carlitz(&f);
        let (x, y) = (poly(&f, &a), poly(&f, &b));
        prop_assert_eq!(c.phi_of(&x).mul(&c.phi_of(&y)), c.phi_of(&x.mul(&y)));
        prop_assert_eq!(c.phi_of(&y).mul(&c.phi_of(&x)), c.phi_of(&x.mul(&y)));
        let r2 = DrinfeldModule::rank2(&f, UPoly::theta(&f), UPoly::one(&f)).unwrap();
        prop_assert_eq!(r2.phi_of(&x).mul(&r2.phi_of(&y)), r2.phi_of(&x.mul(&y)));
    }

    #[test]
    fn series_inverse_is_two_sided(p in prime(), a in coeffs(4)) {
        let f = fq(p);
        let zero = RatFn::zero(&f);
        let mut c = vec![RatFn::one(&f)];
        c.extend(a.iter().map(|&k| RatFn::from_poly(UPoly::monomial(&f, k % f.q(), (k % 5) as usize))));
        let s = carlitz_lab::TauSeries::new(&zero, c, 5);
        let inv = s.invert(5).unwrap();
        prop_assert!(s.mul(&inv).is_one() && inv.mul(&s).is_one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn torsion_polynomials(p in prime(), k in 1usize..3, pick in 0usize..64) {
        let f = fq(p);
        let irr = UPoly::irreducibles(&f, k);
        let pp = &irr[pick % irr.len()];
        let t = DrinfeldModule::carlitz(&f).torsion_poly(pp).unwrap();
        prop_assert!(t.is_eisenstein());
        prop_assert_eq!(t.xg_prime_plus_g(), vec![pp.clone()]);
    }

    #[test]
    fn galois_is_an_algebra_automorphism(a in coeffs(3), b in coeffs(3), c in coeffs(3), d in coeffs(3), g in 0usize..8) {
        let f = fq(3);
        let cf = CycField::new(&f, &[UPoly::theta(&f), UPoly::parse(&f, "T+1", "T").unwrap()]).unwrap();
        let n = cf.degree();
        let el = |u: &[u32], v: &[u32]| {
            let coords = (0..n).map(|i| ratfn(&f, &u[..u.len().min(i + 1)], &v[..v.len().min(i)])).collect();
            cf.from_coords(coords).unwrap()
        };
        let (x, y) = (el(&a, &b), el(&c, &d));
        let g = g % cf.group_order();
        let s = |z: &_| cf.galois_act(g, z).unwrap();
        prop_assert_eq!(s(&x.add(&y)), s(&x).add(&s(&y)));
        prop_assert_eq!(s(&x.mul(&y)), s(&x).mul(&s(&y)));
        let k = cf.from_k(&ratfn(&f, &a, &b));
        prop_assert_eq!(s(&k), k);
    }

    #[test]
    fn symbol_is_multiplicative(a in coeffs(3), b in coeffs(3)) {
        let f = fq(3);
        let cf = CycField::new(&f, &[UPoly::parse(&f, "T^2+1", "T").unwrap()]).unwrap();
        let (x, y) = (monic(&f, &a), monic(&f, &b));
        let m = cf.primes()[0].clone();
        prop_assume!(x.gcd(&m).is_one() && y.gcd(&m).is_one());
        prop_assert_eq!(cf.symbol(&x.mul(&y)), cf.symbol(&x).mul(&cf.symbol(&y), &cf));
    }

    #[test]
    fn splitting_accounts_for_degree(k in 1usize..4, pick in 0usize..64) {
        let f = fq(3);
        let cf = CycField::new(&f, &[UPoly::theta(&f), UPoly::parse(&f, "T^2+1", "T").unwrap()]).unwrap();
        let irr = UPoly::irreducibles(&f, k);
        let s = cf.prime_splitting(&irr[pick % irr.len()]).unwrap();
        prop_assert_eq!(s.e * s.f * s.g, cf.degree());
    }

    #[test]
    fn pellarin_strata_are_symmetric(p in prime(), d in 0usize..4) {
        let f = fq(p);
        let s = pellarin_stratum(&f, 2, d).unwrap();
        let zero = RatFn::zero(&f);
        let mut swapped = MPoly::zero(2, false, &zero);
        for (e, c) in s.terms() {
            swapped.add_term(vec![e[1], e[0]], c.clone());
        }
        prop_assert_eq!(swapped, s);
    }

    #[test]
    fn strata_valuations_grow(p in prime(), d in 0usize..6) {
        let f = fq(p);
        let k = CycField::trivial(&f);
        for (b, c) in [("1", 0i64), ("T", 1)] {
            let s = stratum_sum(&k, 1, d, &parse_payload(&k, 0, b).unwrap()).unwrap();
            let v = s.coeff(&[]).as_k().unwrap().v_inf();
            prop_assert!(v.is_none_or(|v| v >= d as i64 - c));
        }
    }

    #[test]
    fn b_basis_round_trip(p in prime(), seed in any::<u64>(), len in 1usize..6) {
        let f = fq(p);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let w = random_ws1(&f, &mut rng, len, 3);
        prop_assert_eq!(WsElem::from_monomial(&w.to_monomial()), w.clone());
        let m = w.to_monomial();
        prop_assert_eq!(WsElem::from_monomial(&m).to_monomial(), m);
    }

    #[test]
    fn det_is_multiplicative_on_blocks(p in prime(), a in prop::collection::vec(coeffs(2), 4), b in prop::collection::vec(coeffs(2), 4)) {
        let f = fq(p);
        let entry = |c: &Vec<u32>| PolyZ::new(&f, c.iter().map(|&k| RatFn::from_poly(UPoly::monomial(&f, k % f.q(), (k / 27) as usize))).collect());
        let m = |v: &Vec<Vec<u32>>| OperatorMatrix { dim: 2, entries: vec![vec![entry(&v[0]), entry(&v[1])], vec![entry(&v[2]), entry(&v[3])]] };
        let (ma, mb) = (m(&a), m(&b));
        prop_assert_eq!(det(&ma.direct_sum(&mb)), det(&ma).mul(&det(&mb)));
        let brute = entry(&a[0]).mul(&entry(&a[3])).sub(&entry(&a[1]).mul(&entry(&a[2])));
        prop_assert_eq!(det(&ma), brute);
    }

    #[test]
    fn euler_factor_operators_compose(i in 0usize..64, j in 0usize..64) {
        let f = fq(3);
        let cf = CycField::new(&f, &[UPoly::theta(&f)]).unwrap();
        let primes: Vec<UPoly> = (1..=2).flat_map(|k| UPoly::irreducibles(&f, k)).filter(|p| !cf.is_ramified(p)).collect();
        let (pp, qq) = (&primes[i % primes.len()], &primes[j % primes.len()]);
        let factor = |p: &UPoly| {
            let dp = p.deg() as usize;
            let mut s = vec![vec![RatFn::zero(&f); cf.group_order()]; dp + 1];
            s[0][cf.group_identity()] = RatFn::one(&f);
            s[dp][cf.group_of(p).unwrap()] = RatFn::inv_monic(p).unwrap().neg();
            s
        };
        let (a, b) = (factor(pp), factor(qq));
        let dmax = (pp.deg() + qq.deg()) as usize;
        let prod = group_series_mul(&cf, &a, &b, dmax);
        let lhs = operator_matrix(&cf, &prod).unwrap();
        let rhs = operator_matrix(&cf, &a).unwrap().mul(&operator_matrix(&cf, &b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn special_polynomials_are_fq_linear(c1 in 0u32..3, c2 in 0u32..3, i in 0usize..4, j in 0usize..4) {
        let f = fq(3);
        let k = CycField::trivial(&f);
        let list = ["1", "T", "X", "T*X^2"];
        let (b1, b2) = (parse_payload(&k, 1, list[i]).unwrap(), parse_payload(&k, 1, list[j]).unwrap());
        let (r1, r2) = (RatFn::constant(&f, c1), RatFn::constant(&f, c2));
        let mix = b1.scale(&r1).add(&b2.scale(&r2));
        let g = |b| special_polynomial(&k, b, 6, DEFAULT_WINDOW, true).unwrap().g;
        let (g1, g2, gm) = (g(&b1), g(&b2), g(&mix));
        for m in 0..=6 {
            let expect = g1[m].scale(&r1).add(&g2[m].scale(&r2)).map_coeffs(|c| c.tidy());
            prop_assert_eq!(&gm[m], &expect);
        }
    }
}
