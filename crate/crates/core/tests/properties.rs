use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use qzeta::exact_algebra::{BigRat, CycloFrac, IntPoly, Jet, RatFunc};
use qzeta::io::{decode_ratfunc, parse_qpoint, parse_range, RatFuncJson};
use qzeta::numerics::IntervalValue;
use qzeta::qtoolkit::{binomial, cyclotomic, d_n, d_n_factored, q_binomial, q_binomial_factored};

fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(n.into(), d.into())
}

fn small_rat() -> impl Strategy<Value = BigRat> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-6i64..=6, 0..5).prop_map(|c| IntPoly::from_i64(&c))
}

fn nonzero_poly() -> impl Strategy<Value = IntPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(), nonzero_poly(), -3i64..=3).prop_map(|(n, d, s)| &RatFunc::from_parts(n, d) * &RatFunc::q_pow(s))
}

fn jet(order: usize) -> impl Strategy<Value = Jet<BigRat>> {
    prop::collection::vec(small_rat(), order + 1).prop_map(Jet::new)
}

fn unit_jet(order: usize) -> impl Strategy<Value = Jet<BigRat>> {
    jet(order).prop_filter("unit", |j| !j.coeff(0).is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratfunc_ring_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn ratfunc_inverse(a in ratfunc()) {
        prop_assume!(!a.is_zero());
        prop_assert_eq!(&a * &a.inv().unwrap(), RatFunc::one());
        prop_assert_eq!(a.invert_variable().invert_variable(), a);
    }

    #[test]
    fn canonical_form_ignores_common_factors(n in poly(), d in nonzero_poly(), k in nonzero_poly()) {
        let plain = RatFunc::from_parts(n.clone(), d.clone());
        let padded = RatFunc::from_parts(&n * &k, &d * &k);
        prop_assert_eq!(&padded, &plain);
        let (pn, pd) = padded.to_integer_parts();
        prop_assert!(IntPoly::gcd(&pn, &pd).degree() == Some(0));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in ratfunc(), b in ratfunc(), x in small_rat()) {
        let (Some(fa), Some(fb)) = (a.eval(&x), b.eval(&x)) else { return Ok(()) };
        prop_assert_eq!((&a * &b).eval(&x), Some(&fa * &fb));
        prop_assert_eq!((&a + &b).eval(&x), Some(&fa + &fb));
    }

    #[test]
    fn json_roundtrip(a in ratfunc()) {
        let text = serde_json::to_string(&RatFuncJson::from_ratfunc(&a)).unwrap();
        prop_assert_eq!(decode_ratfunc(&text).unwrap(), a);
    }

    #[test]
    fn cyclo_matches_ratfunc(a in ratfunc(), b in ratfunc()) {
        let (Ok(ca), Ok(cb)) = (CycloFrac::from_ratfunc(&a), CycloFrac::from_ratfunc(&b)) else {
            return Ok(());
        };
        prop_assert_eq!(ca.to_ratfunc(), a.clone());
        prop_assert_eq!(ca.times(&cb).to_ratfunc(), &a * &b);
        prop_assert_eq!(ca.plus(&cb).to_ratfunc(), &a + &b);
        prop_assert_eq!(ca.invert_variable().to_ratfunc(), a.invert_variable());
    }

    #[test]
    fn jet_products_commute_and_invert(f in unit_jet(5), g in jet(5)) {
        prop_assert!(f.mul(&g).same(&g.mul(&f)));
        let inv = f.invert().unwrap();
        prop_assert!(f.mul(&inv).same(&Jet::one(5)));
        prop_assert!(f.mul(&g).mul(&inv).same(&g));
    }

    #[test]
    fn jet_powers(f in unit_jet(4), e in -3i64..=3) {
        let mut direct = Jet::one(4);
        let step = if e >= 0 { f.clone() } else { f.invert().unwrap() };
        for _ in 0..e.abs() {
            direct = direct.mul(&step);
        }
        prop_assert!(f.powi(e).unwrap().same(&direct));
    }

    #[test]
    fn binomial_jets_add_exponents(e1 in -6i64..=6, e2 in -6i64..=6) {
        let lhs = Jet::<BigRat>::one_plus_eps_pow(e1, 6).mul(&Jet::one_plus_eps_pow(e2, 6));
        prop_assert!(lhs.same(&Jet::one_plus_eps_pow(e1 + e2, 6)));
    }

    #[test]
    fn log_exp_roundtrip(f in unit_jet(5)) {
        let c = f.coeff(0).clone();
        let unit = f.scale_rat(&c.recip());
        let back = unit.log_unit().unwrap().exp_nilpotent();
        prop_assert!(back.same(&unit));
    }

    #[test]
    fn q_binomial_symmetry_and_pascal(n in 1i64..=14, k in 0i64..=14) {
        prop_assume!(k <= n);
        prop_assert_eq!(q_binomial(n, k).unwrap(), q_binomial(n, n - k).unwrap());
        let shifted = if k < n { q_binomial(n - 1, k).unwrap().shift_up(k as usize) } else { IntPoly::zero() };
        let pascal = if k == 0 { shifted } else { &q_binomial(n - 1, k - 1).unwrap() + &shifted };
        prop_assert_eq!(&q_binomial(n, k).unwrap(), &pascal);
        prop_assert_eq!(q_binomial(n, k).unwrap().eval_int(&BigInt::one()), binomial(n, k));
        prop_assert_eq!(q_binomial_factored(n, k).to_ratfunc(), RatFunc::from_poly(&q_binomial(n, k).unwrap()));
    }

    #[test]
    fn cyclotomic_products(n in 1i64..=40) {
        let prod = (1..=n)
            .filter(|d| n % d == 0)
            .fold(IntPoly::one(), |acc, d| &acc * &cyclotomic(d).unwrap());
        prop_assert_eq!(&prod, &-&IntPoly::one_minus_q_pow(n as usize));
        let dn = d_n(n).unwrap();
        for m in 1..=n as usize {
            prop_assert!(dn.exact_div(&IntPoly::one_minus_q_pow(m)).is_some());
        }
        prop_assert_eq!(d_n_factored(n as usize).to_ratfunc(), RatFunc::from_poly(&dn));
    }

    #[test]
    fn interval_enclosure(x in small_rat(), y in small_rat(), dx in 0i64..=5, prec in 24u32..=128) {
        let rx = rat(dx, 1000);
        let bx = IntervalValue::with_radius(&x, &rx, prec);
        let by = IntervalValue::from_rat(&y, prec);
        let xs = [x.clone(), &x + &rx, &x - &rx];
        for xv in &xs {
            prop_assert!(bx.add(&by).contains_rat(&(xv + &y)));
            prop_assert!(bx.sub(&by).contains_rat(&(xv - &y)));
            prop_assert!(bx.mul(&by).contains_rat(&(xv * &y)));
            prop_assert!(bx.powi(3).contains_rat(&(xv * xv * xv)));
            if !y.is_zero() {
                prop_assert!(bx.div(&by).unwrap().contains_rat(&(xv / &y)));
            }
        }
        if !x.is_zero() {
            let sq = IntervalValue::from_rat(&(&x * &x), prec).sqrt().unwrap();
            prop_assert!(sq.contains_rat(&num_traits::Signed::abs(&x)));
        }
    }

    #[test]
    fn qpoint_roundtrip(n in -10_000i64..=10_000, d in 1i64..=10_000) {
        let q = rat(n, d);
        prop_assert_eq!(parse_qpoint(&format!("{n}/{d}")).unwrap(), q.clone());
        prop_assert_eq!(parse_qpoint(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn range_roundtrip(values in prop::collection::vec(-500i64..=500, 1..20), lo in -50i64..=50, len in 0i64..=30) {
        let mut want: Vec<i64> = values.clone();
        want.extend(lo..=lo + len);
        want.sort_unstable();
        want.dedup();
        let mut text: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        text.push(format!("{lo}..{}", lo + len));
        prop_assert_eq!(parse_range(&text.join(",")).unwrap(), want.clone());
        let listed: Vec<String> = want.iter().map(|v| v.to_string()).collect();
        prop_assert_eq!(parse_range(&listed.join(", ")).unwrap(), want);
    }

    #[test]
    fn parsers_never_panic(s in "\\PC{0,40}") {
        let _ = parse_qpoint(&s);
        let _ = parse_range(&s);
        let _ = decode_ratfunc(&s);
    }
}
