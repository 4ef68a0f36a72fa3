use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toruswang::datasets;
use toruswang::dynamics::{code_patch, default_direction, Window};
use toruswang::goldenfield::gq;
use toruswang::modelset::{
    classify_orbit, classify_up_to, occurrences, occurrences_in_window, ring_positions,
    scan_occurrences, AcceptanceWindow, Classification, CutProjectScheme,
};
use toruswang::torusgeom::Vec2G;

fn seed() -> Vec2G {
    Vec2G::new(gq(1, 0, 5), gq(1, 0, 5))
}

#[test]
fn star_map_is_the_projected_lift() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for c in [
        CutProjectScheme::jeandel_rao(seed()),
        CutProjectScheme::u_scheme(Vec2G::new(gq(1, 0, 7), gq(2, 0, 9))),
    ] {
        for _ in 0..1000 {
            let n = (rng.gen_range(-500..=500), rng.gen_range(-500..=500));
            let lift = c.lift(n);
            assert_eq!(c.physical(&lift), Vec2G::from_ints(n.0, n.1));
            assert_eq!(c.internal(&lift), c.star_map(n));
            assert_eq!(c.star_map(n), c.rotation.apply(n, &c.seed));
        }
    }
}

#[test]
fn pattern_occurs_at_its_own_origin() {
    let c = CutProjectScheme::jeandel_rao(seed());
    let p = datasets::jr_coding_partition();
    let v = default_direction();
    let pattern = code_patch(&c.rotation, p, &c.seed, &v, Window::new((0, 0), 2, 2)).unwrap();
    let occ = occurrences(&c, p, &pattern, &v, Window::new((-5, -5), 11, 11)).unwrap();
    assert!(occ.contains(&(0, 0)));
}

#[test]
fn whole_domain_window_accepts_everything() {
    let c = CutProjectScheme::jeandel_rao(seed());
    let w = AcceptanceWindow::new(
        vec![c.rotation.lattice.domain()],
        c.rotation.lattice.clone(),
    );
    let rect = Window::new((-4, -4), 9, 9);
    let occ = occurrences_in_window(&c, &w, &default_direction(), rect).unwrap();
    assert_eq!(occ.len(), 81);
}

#[test]
fn single_tile_occurrences_match_scan() {
    let c = CutProjectScheme::jeandel_rao(seed());
    let p = datasets::jr_coding_partition();
    let v = default_direction();
    let pattern = toruswang::dynamics::Patch::new((0, 0), 1, 1, vec!["7".to_string()]);
    let rect = Window::new((0, 0), 30, 30);
    let occ = occurrences(&c, p, &pattern, &v, rect).unwrap();
    assert!(!occ.is_empty());
    assert_eq!(occ, scan_occurrences(&c, p, &pattern, &v, rect).unwrap());
}

#[test]
fn classification_examples() {
    let r = datasets::jr_rotation();
    let p = datasets::jr_coding_partition();
    assert!(matches!(
        classify_orbit(&r, p, &Vec2G::zero(), 5),
        Classification::Singular { n: (0, 0), .. }
    ));
    let c = CutProjectScheme::jeandel_rao(seed());
    assert_eq!(
        classify_up_to(&c, p, &c.seed, 50),
        Classification::Generic { horizon: 50 }
    );
}

#[test]
fn rings_cover_the_square() {
    let all: Vec<_> = (0..=4).flat_map(ring_positions).collect();
    assert_eq!(all.len(), 81);
    let set: std::collections::BTreeSet<_> = all.into_iter().collect();
    assert_eq!(set.len(), 81);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn occurrences_are_translation_covariant(m in (-6i64..6, -6i64..6)) {
        let p = datasets::jr_coding_partition();
        let v = default_direction();
        let c = CutProjectScheme::jeandel_rao(seed());
        let moved = CutProjectScheme::jeandel_rao(c.rotation.apply(m, &c.seed));
        let pattern = code_patch(&c.rotation, p, &c.seed, &v, Window::new((2, 1), 2, 1)).unwrap();
        let rect = Window::new((0, 0), 12, 12);
        let a = occurrences(&c, p, &pattern, &v, rect.shifted(m)).unwrap();
        let b = occurrences(&moved, p, &pattern, &v, rect).unwrap();
        let b: std::collections::BTreeSet<_> = b.into_iter().map(|n| (n.0 + m.0, n.1 + m.1)).collect();
        prop_assert_eq!(a, b);
    }
}
