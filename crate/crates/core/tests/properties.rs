use num_rational::BigRational;
use proptest::prelude::*;

use edslab::algebra::{all_monic, enumerate_irreducibles, parse_poly, Poly, PrimeField, Rationals};
use edslab::cli::RunConfig;
use edslab::curve::{quadratic_twist, reduce_curve_mod, reduce_point_mod, CurvePoint, WeierstrassCurve};
use edslab::eds::{eds_sequence, gcd_table, square_grid};

fn f5() -> PrimeField {
    PrimeField::new(5).unwrap()
}

fn q_poly() -> impl Strategy<Value = Poly<Rationals>> {
    prop::collection::vec((-20i64..=20, 1i64..=6), 0..7).prop_map(|cs| {
        Poly::new(Rationals, cs.into_iter().map(|(n, d)| BigRational::new(n.into(), d.into())).collect())
    })
}

fn fp_poly(p: u64, max_len: usize) -> impl Strategy<Value = Poly<PrimeField>> {
    prop::collection::vec(0..p, 0..max_len).prop_map(move |cs| Poly::new(PrimeField::new(p).unwrap(), cs))
}

fn nonzero<F: edslab::algebra::Field>(s: impl Strategy<Value = Poly<F>>) -> impl Strategy<Value = Poly<F>> {
    s.prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distributive_over_q(a in q_poly(), b in q_poly(), c in q_poly()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn divrem_reconstructs(f in fp_poly(7, 12), g in nonzero(fp_poly(7, 6))) {
        let (q, r) = f.divrem(&g).unwrap();
        prop_assert_eq!(&(&q * &g) + &r, f);
        prop_assert!(r.is_zero() || r.deg_or_zero() < g.deg_or_zero());
    }

    #[test]
    fn gcd_divides_and_scales(f in nonzero(q_poly()), g in nonzero(q_poly()), h in nonzero(q_poly())) {
        let d = f.gcd(&g).unwrap();
        prop_assert!(d.divides(&f) && d.divides(&g));
        prop_assert!(d.is_monic());
        let scaled = (&f * &h).gcd(&(&g * &h)).unwrap();
        prop_assert_eq!(scaled, (&d * &h).monic());
    }

    #[test]
    fn sqrt_of_square(g in nonzero(q_poly())) {
        let g = g.monic();
        prop_assert_eq!((&g * &g).sqrt().unwrap(), g);
    }

    #[test]
    fn parse_inverts_display_over_q(f in q_poly()) {
        prop_assert_eq!(parse_poly(&f.to_string(), &Rationals).unwrap(), f);
    }

    #[test]
    fn parse_inverts_display_mod_p(f in fp_poly(11, 9)) {
        let k = PrimeField::new(11).unwrap();
        prop_assert_eq!(parse_poly(&f.to_string(), &k).unwrap(), f);
    }

    #[test]
    fn group_axioms_over_f5_twist(m in 1i64..8, n in 1i64..8, l in 1i64..8) {
        let tw = quadratic_twist(1, 1, parse_poly("T^3+T+1", &f5()).unwrap()).unwrap();
        let (e, p) = (&tw.curve, tw.point.as_ref().unwrap());
        let (mp, np, lp) = (e.scalar_mul(m, p).unwrap(), e.scalar_mul(n, p).unwrap(), e.scalar_mul(l, p).unwrap());
        prop_assert_eq!(e.add(&mp, &np).unwrap(), e.add(&np, &mp).unwrap());
        prop_assert_eq!(
            e.add(&e.add(&mp, &np).unwrap(), &lp).unwrap(),
            e.add(&mp, &e.add(&np, &lp).unwrap()).unwrap()
        );
        prop_assert_eq!(e.add(&mp, &e.neg(&mp)).unwrap(), CurvePoint::Infinity);
        prop_assert_eq!(e.add(&mp, &CurvePoint::Infinity).unwrap(), mp.clone());
        prop_assert_eq!(e.add(&mp, &np).unwrap(), e.scalar_mul(m + n, p).unwrap());
    }
}

#[test]
fn gcd_exhaustive_over_f5() {
    // Every pair of monic polynomials of degree <= 2: the gcd is the
    // highest-degree monic common divisor found by brute force.
    let k = f5();
    let polys: Vec<_> = (0..=2).flat_map(|d| all_monic(k, d)).collect();
    for f in &polys {
        for g in &polys {
            let brute = polys.iter().filter(|d| d.divides(f) && d.divides(g)).max_by_key(|d| d.deg_or_zero()).unwrap();
            assert_eq!(&f.gcd(g).unwrap(), brute, "gcd({f}, {g})");
        }
    }
}

#[test]
fn reduction_is_a_homomorphism() {
    let k = f5();
    let tw = quadratic_twist(1, 1, parse_poly("T^3+T+1", &k).unwrap()).unwrap();
    let p = tw.point.as_ref().unwrap();
    for pi in enumerate_irreducibles(k, 2, 1000).unwrap() {
        let Ok((ered, pred)) = reduce_point_mod(&tw.curve, p, &pi) else { continue };
        for n in 1..=9 {
            let lifted = tw.curve.scalar_mul(n, p).unwrap();
            let (_, image) = reduce_point_mod(&tw.curve, &lifted, &pi).unwrap();
            assert_eq!(image, ered.scalar_mul(n, &pred).unwrap(), "pi = {pi}, n = {n}");
        }
        assert!(reduce_curve_mod(&tw.curve, &pi).is_ok());
    }
}

#[test]
fn denominators_are_squares_and_negation_invariant() {
    let tw = quadratic_twist(BigRational::from_integer(1.into()), BigRational::from_integer(1.into()), parse_poly("T^3+T+1", &Rationals).unwrap()).unwrap();
    let p = tw.point.clone().unwrap();
    let minus = tw.curve.neg(&p);
    let plus = eds_sequence(&tw.curve, &p, 8).unwrap();
    let neg = eds_sequence(&tw.curve, &minus, 8).unwrap();
    for (a, b) in plus.iter().zip(&neg) {
        assert_eq!(a.d, b.d, "n = {}", a.n);
        let x = tw.curve.scalar_mul(a.n as i64, &p).unwrap();
        assert_eq!(x.x().unwrap().den(), &(&a.d * &a.d));
    }
}

#[test]
fn gcd_table_is_symmetric() {
    let e = WeierstrassCurve::short(Rationals, BigRational::from_integer(1.into()), BigRational::from_integer(1.into())).unwrap();
    let p = CurvePoint::affine(BigRational::from_integer(0.into()), BigRational::from_integer(1.into()));
    let rows = gcd_table(&e, &p, &e, &p, &square_grid(6)).unwrap();
    for r in &rows {
        let mirror = rows.iter().find(|s| s.n1 == r.n2 && s.n2 == r.n1).unwrap();
        assert_eq!(r.g, mirror.g);
    }
}

#[test]
fn shipped_configs_round_trip() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = RunConfig::load(&path).unwrap();
        let reparsed = RunConfig::parse(&cfg.to_string()).unwrap();
        assert_eq!(reparsed.to_string(), cfg.to_string(), "{}", path.display());
        assert_eq!(reparsed.digest(), cfg.digest());
    }
}
