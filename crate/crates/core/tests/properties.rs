mod common;

use std::sync::OnceLock;

use num_bigint::BigUint;
use proptest::prelude::*;
use xtr_vmss::gf::{Gfp2, Gfp6};
use xtr_vmss::harness::Session;
use xtr_vmss::vmss::{self, Bulletin, Scheme, SchemeConfig, Way};
use xtr_vmss::xtr::{self, XtrParams};

use common::{lambda32, rng};

fn params() -> &'static XtrParams {
    static P: OnceLock<XtrParams> = OnceLock::new();
    P.get_or_init(lambda32)
}

fn fp2(a: u64, b: u64) -> Gfp2 {
    Gfp2::new(a.into(), b.into(), params().p())
}

fn fp6(v: [u64; 6]) -> Gfp6 {
    let f = params().field();
    Gfp6::from_coeffs([fp2(v[0], v[1]), fp2(v[2], v[3]), fp2(v[4], v[5])], f).unwrap()
}

fn arb_fp2() -> impl Strategy<Value = Gfp2> {
    (any::<u64>(), any::<u64>()).prop_map(|(a, b)| fp2(a, b))
}

fn arb_fp6() -> impl Strategy<Value = Gfp6> {
    any::<[u64; 6]>().prop_map(fp6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fp2_is_a_field(a in arb_fp2(), b in arb_fp2(), c in arb_fp2()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(&a + &(-&a), Gfp2::zero(params().p()));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn fp2_frobenius_is_the_pth_power(a in arb_fp2()) {
        prop_assert_eq!(a.frobenius(), a.pow(params().p().value()));
        prop_assert_eq!(a.frobenius().frobenius(), a.clone());
        prop_assert_eq!(a.square(), &a * &a);
    }

    #[test]
    fn fp6_is_a_commutative_ring(a in arb_fp6(), b in arb_fp6(), c in arb_fp6()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(a.square(), &a * &a);
    }

    #[test]
    fn fp6_trace_is_additive_and_lands_in_fp2(a in arb_fp6(), b in arb_fp6()) {
        let ta = a.trace().unwrap();
        let tb = b.trace().unwrap();
        prop_assert_eq!((&a + &b).trace().unwrap(), &ta + &tb);
        let [x, y, z] = a.conjugates().unwrap();
        prop_assert_eq!(&(&x + &y) + &z, Gfp6::from_base(&ta, params().field()));
    }

    #[test]
    fn ladder_is_the_trace_of_powers(n in any::<u64>(), m in 0u64..1 << 20) {
        let p = params();
        let (n, m) = (BigUint::from(n), BigUint::from(m));
        let sn = xtr::trace_ladder(p.c(), &n);
        prop_assert_eq!(&sn, &p.g_pow(&n).trace().unwrap());
        prop_assert_eq!(xtr::trace_ladder(&sn, &m), xtr::trace_ladder(p.c(), &(&n * &m)));
        let reduced = &n % p.q().value();
        prop_assert_eq!(&sn, &xtr::trace_ladder(p.c(), &reduced));
    }

    #[test]
    fn powers_of_g_stay_in_the_subgroup(a in any::<u64>(), b in any::<u64>()) {
        let p = params();
        let (a, b) = (BigUint::from(a), BigUint::from(b));
        let ga = p.g_pow(&a);
        prop_assert!(xtr::subgroup_check(p, &ga));
        prop_assert_eq!(&ga * &p.g_pow(&b), p.g_pow(&(&a + &b)));
        let shadow = xtr::trace_ladder(p.c(), &a);
        prop_assert_eq!(
            xtr::public_shadow_check(p, &shadow),
            &a % p.q().value() != BigUint::from(0u8)
        );
    }

    #[test]
    fn encoding_matches_its_definition(a in any::<u64>(), b in any::<u64>()) {
        let p = params();
        let t = fp2(a, b);
        let (z1, z2) = t.coords();
        let expect = (z1 + z2 * p.p().value()) % p.q().value();
        let got = xtr::encode_to_zq(&t, p.q());
        prop_assert_eq!(got.value(), &expect);
    }

    #[test]
    fn element_text_roundtrips(a in arb_fp2(), b in arb_fp6(), bump in 0u64..1000) {
        let p = params();
        prop_assert_eq!(Gfp2::parse_canonical(&a.to_canonical(), p.p(), 1).unwrap(), a.clone());
        prop_assert_eq!(Gfp6::parse_canonical(&b.to_canonical(), p.field(), 1).unwrap(), b);
        let (z1, z2) = a.coords();
        let unreduced = format!("{},{}", z1 + p.p().value() + bump, z2);
        prop_assert!(Gfp2::parse_canonical(&unreduced, p.p(), 1).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn dealt_bulletins_roundtrip_and_recover(
        seed in any::<u64>(),
        scheme in prop::sample::select(Scheme::ALL.to_vec()),
        (k, m, l) in (2usize..5).prop_flat_map(|k| (Just(k), k..7, 1usize..4)),
        pick in any::<prop::sample::Index>(),
    ) {
        let p = params();
        let config = SchemeConfig::new(scheme, k, m, l).unwrap();
        let s = Session::new(p, &config, &mut rng(seed)).unwrap();
        let text = s.bulletin.to_text();
        let back = Bulletin::parse(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert!(vmss::verify_consistency(&back).unwrap().iter().all(|(_, ok)| *ok));
        let start = pick.index(m - k + 1) as u64;
        let shares: Vec<_> = (start + 1..=start + k as u64).map(|i| s.share(i).unwrap()).collect();
        for way in [Way::Interpolation, Way::Consecutive] {
            let got: Vec<_> = vmss::recover(&back, &shares, way).unwrap().into_iter().map(|x| x.value).collect();
            prop_assert_eq!(&got, &s.secrets);
        }
    }
}
