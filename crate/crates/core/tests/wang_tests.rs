use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toruswang::datasets;
use toruswang::dynamics::{default_direction, Patch, Z2Rotation};
use toruswang::goldenfield::{g, gq, GoldenNumber as G};
use toruswang::torusgeom::{Atom, ConvexPolygon, Lattice, Locator, Partition, Vec2G};
use toruswang::wang::{derive_tileset, find_periods, is_valid, TileSet, WangTile};

/// Tiles read off at sampled points: (Y(x), Z(x), Y(x − α), Z(x − β)).
fn sampled_tiles(
    r: &Z2Rotation,
    y: &Partition,
    z: &Partition,
    samples: usize,
) -> BTreeSet<WangTile> {
    let (ly, lz) = (Locator::new(y), Locator::new(z));
    let v = Vec2G::new(G::one(), gq(1, 0, 3));
    let (wx, wy) = (r.lattice.g1.x.to_f64(), r.lattice.g2.y.to_f64());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let den = 1_000_003;
    (0..samples)
        .map(|_| {
            let x = Vec2G::new(
                gq(rng.gen_range(0..(wx * den as f64) as i64), 0, den),
                gq(rng.gen_range(0..(wy * den as f64) as i64), 0, den),
            );
            WangTile::new(
                ly.locate(&x, &v).unwrap(),
                lz.locate(&x, &v).unwrap(),
                ly.locate(&(&x - &r.alpha), &v).unwrap(),
                lz.locate(&(&x - &r.beta), &v).unwrap(),
            )
        })
        .collect()
}

#[test]
fn jr_derivation_matches_sampling() {
    let r = datasets::jr_rotation();
    let (ts, p) = derive_tileset(&r, &datasets::jr_y(), &datasets::jr_z()).unwrap();
    let derived: BTreeSet<WangTile> = ts.tiles.iter().cloned().collect();
    let listed: BTreeSet<WangTile> = datasets::jr_tiles().tiles.into_iter().collect();
    assert_eq!(derived, listed);
    assert_eq!(p.atoms.len(), 11);
    let seen = sampled_tiles(&r, &datasets::jr_y(), &datasets::jr_z(), 20_000);
    assert_eq!(seen, derived);
}

#[test]
fn ex3_gives_a_single_tile() {
    let r = datasets::ex3_rotation();
    let (ts, p) = derive_tileset(&r, &datasets::ex3_y(), &datasets::ex3_z()).unwrap();
    assert_eq!(ts.tiles, vec![WangTile::from_letters("ABAB")]);
    assert_eq!(p.atoms.len(), 1);
}

fn strips() -> (Partition, Partition) {
    let (z, h, o) = (G::zero(), gq(1, 0, 2), G::one());
    let y = Partition::new(
        Lattice::square(),
        vec![
            Atom::new("A", vec![ConvexPolygon::rectangle(&z, &z, &h, &o)]),
            Atom::new("B", vec![ConvexPolygon::rectangle(&h, &z, &o, &o)]),
        ],
    )
    .unwrap();
    let zz = Partition::new(
        Lattice::square(),
        vec![
            Atom::new("C", vec![ConvexPolygon::rectangle(&z, &z, &o, &h)]),
            Atom::new("D", vec![ConvexPolygon::rectangle(&z, &h, &o, &o)]),
        ],
    )
    .unwrap();
    (y, zz)
}

#[test]
fn two_strips_against_sampling() {
    let (y, z) = strips();
    let s = g(-1, 1);
    let r = Z2Rotation::new(
        Lattice::square(),
        Vec2G::new(s.clone(), G::zero()),
        Vec2G::new(G::zero(), s),
    );
    let (ts, p) = derive_tileset(&r, &y, &z).unwrap();
    // Y_i ∩ (Y_k + α) nonempty for all four pairs since 0 < φ⁻¹ < 1
    assert_eq!(ts.len(), 16);
    assert_eq!(p.total_area(), G::one());
    let seen = sampled_tiles(&r, &y, &z, 5_000);
    assert_eq!(seen, ts.tiles.iter().cloned().collect());
}

#[test]
fn derivation_ignores_atom_order() {
    let r = datasets::jr_rotation();
    let (y, z) = (datasets::jr_y(), datasets::jr_z());
    let mut y2 = y.clone();
    y2.atoms.reverse();
    let mut z2 = z.clone();
    z2.atoms.rotate_left(2);
    let (a, _) = derive_tileset(&r, &y, &z).unwrap();
    let (b, _) = derive_tileset(&r, &y2, &z2).unwrap();
    assert_eq!(a.tiles, b.tiles);
}

#[test]
fn no_jr_tile_is_doubly_symmetric() {
    for t in &datasets::jr_tiles().tiles {
        assert!(!(t.right == t.left && t.top == t.bottom), "{t}");
    }
}

#[test]
fn ex4_constant_patch_is_valid_and_periodic() {
    let t = datasets::ex4_tiles();
    assert_eq!(t.len(), 20);
    let p = Patch::new((0, 0), 30, 30, vec![0usize; 900]);
    assert!(is_valid(&p, &t).unwrap().valid);
    let periods = find_periods(&p, 10);
    assert!(periods.contains(&(1, 0)) && periods.contains(&(0, 1)));
}

#[test]
fn puzzle_patch_is_valid() {
    let v = is_valid(&datasets::puzzle_patch(), &datasets::jr_tiles()).unwrap();
    assert!(v.valid, "{:?}", v.violations);
}

#[test]
fn tileset_text_round_trip() {
    let t = datasets::u_tiles();
    let back = TileSet::from_text(&t.to_text()).unwrap();
    assert_eq!(back.tiles, t.tiles);
    assert!(TileSet::new(vec![WangTile::from_ints(1, 1, 1, 1); 2]).is_err());
}

fn rat(n: i64) -> G {
    gq(n, 0, 100)
}

#[test]
fn sheet_label_positions() {
    let nodes = [
        ((16, 444), "6"),
        ((129, 362), "7"),
        ((24, 343), "5"),
        ((77, 362), "4"),
        ((15, 265), "2"),
        ((81, 265), "10"),
        ((82, 200), "8"),
        ((18, 200), "7"),
        ((130, 200), "3"),
        ((40, 120), "9"),
        ((23, 78), "1"),
        ((40, 20), "0"),
    ];
    let p = datasets::jr_coding_partition();
    let loc = Locator::new(p);
    let v = default_direction();
    for ((x, y), want) in nodes {
        let pt = Vec2G::new(rat(x), rat(y));
        assert_eq!(loc.locate(&pt, &v).unwrap(), want, "at ({x}, {y})/100");
    }
}

#[test]
fn sheet_and_derived_partitions_agree() {
    let derived = Locator::new(datasets::jr_coding_partition());
    let sheet_p = datasets::jr_p0_sheet();
    let sheet = Locator::new(&sheet_p);
    let v = default_direction();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..2000 {
        let x = Vec2G::new(
            gq(rng.gen_range(0..1618), 0, 1000),
            gq(rng.gen_range(0..4618), 0, 1000),
        );
        assert_eq!(
            derived.locate(&x, &v).unwrap(),
            sheet.locate(&x, &v).unwrap()
        );
    }
}
