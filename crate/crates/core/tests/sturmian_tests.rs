use proptest::prelude::*;
use toruswang::goldenfield::{g, gq};
use toruswang::sturmian::{scan_factors, to_string, Bead, CircleCoding};

#[test]
fn factors_match_long_scan() {
    let c = CircleCoding::golden();
    let word = c.code_necklace(-500, 500).unwrap();
    for n in 0..=8 {
        assert_eq!(
            c.allowed_factors(n).unwrap(),
            scan_factors(&word, n),
            "n = {n}"
        );
    }
}

#[test]
fn necklace_prefix() {
    let c = CircleCoding::golden();
    assert_eq!(to_string(&c.code_necklace(-2, 8).unwrap()), "BRBBRBBRBRB");
    assert!(c.code_necklace(3, 2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn complexity_is_n_plus_one(a in 1i64..20, b in 1i64..20, d in 1i64..10, n in 0usize..25) {
        let c = CircleCoding::new(gq(a, b, d)).unwrap();
        prop_assert_eq!(c.complexity(n).unwrap(), n + 1);
    }

    #[test]
    fn colors_are_periodic_in_circumference(k in -50i64..50, m in -5i64..5) {
        let c = CircleCoding::new(g(1, 1)).unwrap();
        let x = toruswang::goldenfield::GoldenNumber::from_int(k);
        let y = &x + &(&c.circumference() * &toruswang::goldenfield::GoldenNumber::from_int(m));
        prop_assert_eq!(c.color_at(&x), c.color_at(&y));
    }
}

#[test]
fn blue_is_the_long_arc() {
    let c = CircleCoding::golden();
    let w = c.code_necklace(0, 999).unwrap();
    let blue = w.iter().filter(|&&b| b == Bead::B).count();
    assert!(blue > 600 && blue < 630);
}
