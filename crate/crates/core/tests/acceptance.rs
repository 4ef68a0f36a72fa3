//! Acceptance suite: one line per criterion, printed to stderr.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toruswang::datasets;
use toruswang::dynamics::{
    code_patch, code_patch_atoms, default_direction, fiber_signatures, frequencies, pattern_count,
    pet_view, scan_patterns, sector_directions, Generator, Patch, Shape, Window, Z2Rotation,
};
use toruswang::goldenfield::{g, gq, GoldenNumber as G};
use toruswang::modelset::{occurrences, sample_generic_point, scan_occurrences, CutProjectScheme};
use toruswang::sturmian::{to_string, CircleCoding};
use toruswang::torusgeom::{Partition, Vec2G};
use toruswang::wang::{derive_tileset, find_periods, is_valid, WangTile};

const HORIZON: usize = 50;
const FREQ_TOL: f64 = 0.01;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn report(k: usize, name: &str, o: &Outcome) {
    let line = match o {
        Ok(d) => format!("criterion {k:>2} PASS  {name}: {d}\n"),
        Err(d) => format!("criterion {k:>2} FAIL  {name}: {d}\n"),
    };
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn generic_points(n: usize, seed: u64) -> Vec<Vec2G> {
    let r = datasets::jr_rotation();
    let p = datasets::jr_coding_partition();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| sample_generic_point(&r, p, HORIZON, &mut rng))
        .collect()
}

fn c1_derivation() -> Outcome {
    let start = Instant::now();
    let (ts, _) = derive_tileset(
        &datasets::jr_rotation(),
        &datasets::jr_y(),
        &datasets::jr_z(),
    )
    .map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let want: BTreeSet<WangTile> = [
        (2, 4, 2, 1),
        (2, 2, 2, 0),
        (1, 1, 3, 1),
        (1, 2, 3, 2),
        (3, 1, 3, 3),
        (0, 1, 3, 1),
        (0, 0, 0, 1),
        (3, 1, 0, 2),
        (0, 2, 1, 2),
        (1, 2, 1, 4),
        (3, 3, 1, 2),
    ]
    .iter()
    .map(|&(a, b, c, d)| WangTile::from_ints(a, b, c, d))
    .collect();
    let got: BTreeSet<WangTile> = ts.tiles.iter().cloned().collect();
    ensure(got == want && ts.len() == 11, || {
        format!("derived {} tiles, differs from the list", ts.len())
    })?;
    ensure(secs < 5.0, || format!("took {secs:.2}s"))?;
    Ok(format!("11 tiles in {secs:.3}s"))
}

fn c2_frequencies() -> Outcome {
    let p = datasets::jr_coding_partition();
    let inv = |x: G| G::one() / x;
    let a = inv(g(6, 2));
    let b = inv(g(2, 8));
    let want: Vec<(usize, G)> = vec![
        (0, a.clone()),
        (1, a.clone()),
        (2, inv(g(10, 18))),
        (3, a.clone()),
        (4, b.clone()),
        (5, inv(g(4, 5))),
        (6, a.clone()),
        (7, G::from_int(5) / g(14, 12)),
        (8, b.clone()),
        (9, a),
        (10, b),
    ];
    let got = frequencies(p);
    for (i, f) in &want {
        let label = i.to_string();
        let have = got
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| format!("no atom {label}"))?;
        ensure(&have == f, || format!("ν([{i}]) = {have}, expected {f}"))?;
    }
    let x = &generic_points(1, 21)[0];
    let r = datasets::jr_rotation();
    let patch = code_patch_atoms(
        &r,
        p,
        x,
        &default_direction(),
        Window::new((0, 0), 200, 200),
    )
    .map_err(|e| e.to_string())?;
    let mut counts = [0usize; 11];
    for (_, &i) in patch.entries() {
        counts[p.atoms[i].label.parse::<usize>().unwrap()] += 1;
    }
    let mut worst = 0.0f64;
    for (i, f) in &want {
        let emp = counts[*i] as f64 / 40_000.0;
        worst = worst.max((emp - f.to_f64()).abs());
    }
    ensure(worst < FREQ_TOL, || {
        format!("empirical deviation {worst:.4}")
    })?;
    Ok(format!(
        "11 exact values, 200×200 max deviation {worst:.4} < {FREQ_TOL}"
    ))
}

fn c3_validity() -> Outcome {
    let tiles = datasets::jr_tiles();
    let v = is_valid(&datasets::puzzle_patch(), &tiles).map_err(|e| e.to_string())?;
    ensure(v.valid, || format!("puzzle patch: {:?}", v.violations))?;
    let r = datasets::jr_rotation();
    let p = datasets::jr_coding_partition();
    let pts = generic_points(50, 31);
    for (k, x) in pts.iter().enumerate() {
        let patch = code_patch_atoms(&r, p, x, &default_direction(), Window::new((0, 0), 20, 20))
            .map_err(|e| e.to_string())?;
        let idx = patch.map(|&i| p.atoms[i].label.parse::<usize>().unwrap());
        let v = is_valid(&idx, &tiles).map_err(|e| e.to_string())?;
        ensure(v.violations.is_empty(), || {
            format!("point {k}: {} violations", v.violations.len())
        })?;
    }
    Ok("5×5 puzzle patch valid, 50 coded 20×20 patches with 0 violations".into())
}

fn c4_model_sets() -> Outcome {
    let p = datasets::jr_coding_partition();
    let v = default_direction();
    let x = generic_points(1, 41).remove(0);
    let c = CutProjectScheme::jeandel_rao(x);
    let rect = Window::new((0, 0), 50, 50);
    let source = code_patch(&c.rotation, p, &c.seed, &v, Window::new((0, 0), 10, 10))
        .map_err(|e| e.to_string())?;
    let mut sizes = Vec::new();
    for (w, h) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2)] {
        let pattern = source
            .restrict(Window::new((3, 4), w, h))
            .expect("inside")
            .with_origin((0, 0));
        let occ = occurrences(&c, p, &pattern, &v, rect).map_err(|e| e.to_string())?;
        let scan = scan_occurrences(&c, p, &pattern, &v, rect).map_err(|e| e.to_string())?;
        ensure(occ == scan, || format!("{w}×{h}: model set ≠ scan"))?;
        ensure(!occ.is_empty(), || format!("{w}×{h}: no occurrence"))?;
        sizes.push(occ.len());
    }
    let c0 = CutProjectScheme::jeandel_rao(Vec2G::zero());
    let minus = -&v;
    let pattern: Patch<String> =
        code_patch(&c0.rotation, p, &c0.seed, &v, Window::new((0, 0), 2, 2))
            .map_err(|e| e.to_string())?;
    let mut sets = Vec::new();
    for dir in [&v, &minus] {
        let occ = occurrences(&c0, p, &pattern, dir, rect).map_err(|e| e.to_string())?;
        let scan = scan_occurrences(&c0, p, &pattern, dir, rect).map_err(|e| e.to_string())?;
        ensure(occ == scan, || {
            format!("singular seed, v = {dir}: model set ≠ scan")
        })?;
        sets.push(occ);
    }
    ensure(sets[0] != sets[1], || {
        "opposite directions gave equal sets".into()
    })?;
    Ok(format!(
        "generic counts {sizes:?}; singular seed ±v: {} vs {} occurrences",
        sets[0].len(),
        sets[1].len()
    ))
}

fn c5_star_map() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let schemes = [
        CutProjectScheme::jeandel_rao(Vec2G::new(gq(1, 0, 5), gq(1, 0, 5))),
        CutProjectScheme::u_scheme(Vec2G::new(gq(1, 0, 7), gq(2, 0, 9))),
    ];
    for c in &schemes {
        for _ in 0..1000 {
            let n = (rng.gen_range(-1000..=1000), rng.gen_range(-1000..=1000));
            let lift = c.lift(n);
            let direct = c.rotation.apply(n, &c.seed);
            ensure(
                c.internal(&lift) == direct && c.star_map(n) == direct,
                || format!("mismatch at {n:?}"),
            )?;
            ensure(c.physical(&lift) == Vec2G::from_ints(n.0, n.1), || {
                format!("physical projection at {n:?}")
            })?;
        }
    }
    Ok("1000 exact matches per scheme (JR, U)".into())
}

fn c6_complexity() -> Outcome {
    let r = datasets::jr_rotation();
    let p = datasets::jr_coding_partition();
    let x = generic_points(1, 61).remove(0);
    let patch = code_patch_atoms(
        &r,
        p,
        &x,
        &default_direction(),
        Window::new((0, 0), 500, 500),
    )
    .map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for (w, h) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
        let s = Shape::rect(w, h);
        let count = pattern_count(&r, p, &s);
        let seen = scan_patterns(&patch, &s).len();
        ensure(count == seen, || {
            format!("{w}×{h}: count {count}, scanned {seen}")
        })?;
        out.push(format!("{w}×{h}={count}"));
    }
    ensure(out[0] == "1×1=11", || "1×1 count is not 11".into())?;
    Ok(out.join(" "))
}

fn stable_count(
    r: &Z2Rotation,
    p: &Partition,
    x: &Vec2G,
    dirs: &[Vec2G],
    max_radius: usize,
) -> Result<Vec<usize>, String> {
    (0..=max_radius)
        .map(|rad| {
            fiber_signatures(r, p, x, rad, dirs)
                .map(|s| s.len())
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn c7_fibers() -> Outcome {
    let r = datasets::jr_rotation();
    let p = datasets::jr_coding_partition();
    let dirs = sector_directions(p);
    ensure(dirs.len() == 8, || {
        format!("{} sector directions", dirs.len())
    })?;
    let max_radius = 6;
    let origin = stable_count(&r, p, &Vec2G::zero(), &dirs, max_radius)?;
    let r_star = origin
        .iter()
        .position(|&c| c == 8)
        .ok_or_else(|| format!("origin counts {origin:?}"))?;
    ensure(origin[r_star..].iter().all(|&c| c == 8), || {
        format!("origin counts {origin:?}")
    })?;
    let edge = Vec2G::new(gq(1, 0, 3), G::one());
    let edge_counts = stable_count(&r, p, &edge, &dirs, max_radius)?;
    ensure(edge_counts[1..].iter().all(|&c| c == 2), || {
        format!("boundary point counts {edge_counts:?}")
    })?;
    let x = generic_points(1, 71).remove(0);
    let gen = stable_count(&r, p, &x, &dirs, max_radius)?;
    ensure(gen.iter().all(|&c| c == 1), || {
        format!("generic counts {gen:?}")
    })?;
    Ok(format!(
        "origin 8 from R* = {r_star} to {max_radius}, boundary point 2, generic 1"
    ))
}

fn c8_periods() -> Outcome {
    let r = datasets::jr_rotation();
    let p = datasets::jr_coding_partition();
    for (k, x) in generic_points(10, 81).iter().enumerate() {
        let patch = code_patch_atoms(&r, p, x, &default_direction(), Window::new((0, 0), 30, 30))
            .map_err(|e| e.to_string())?;
        let periods = find_periods(&patch, 10);
        ensure(periods.is_empty(), || {
            format!("patch {k}: periods {periods:?}")
        })?;
    }
    let tiles = datasets::ex4_tiles();
    let constant = Patch::new((0, 0), 30, 30, vec![0usize; 900]);
    ensure(
        is_valid(&constant, &tiles)
            .map_err(|e| e.to_string())?
            .valid,
        || "constant patch invalid".into(),
    )?;
    let periods = find_periods(&constant, 10);
    ensure(
        periods.contains(&(1, 0)) && periods.contains(&(0, 1)),
        || format!("constant periods {periods:?}"),
    )?;
    Ok(format!(
        "10 JR patches aperiodic; constant τ₀ patch has {} periods incl. (1,0), (0,1)",
        periods.len()
    ))
}

fn c9_sturmian() -> Outcome {
    let c = CircleCoding::golden();
    let s = to_string(&c.code_necklace(-2, 8).map_err(|e| e.to_string())?);
    ensure(s == "BRBBRBBRBRB", || format!("necklace {s}"))?;
    for n in 0..=50 {
        let k = c.complexity(n).map_err(|e| e.to_string())?;
        ensure(k == n + 1, || format!("complexity({n}) = {k}"))?;
    }
    let f = c.blue_frequency(0, 9_999).map_err(|e| e.to_string())?;
    let phi = G::phi().to_f64();
    let target = phi / (phi + 1.0);
    ensure((f - target).abs() < FREQ_TOL, || {
        format!("B frequency {f:.4}")
    })?;
    Ok(format!(
        "necklace {s}, complexity n+1 up to 50, B frequency {f:.4} vs {target:.4}"
    ))
}

fn translations(r: &Z2Rotation, gen: Generator) -> BTreeSet<Vec2G> {
    pet_view(r, gen)
        .pieces
        .into_iter()
        .map(|(_, t)| t)
        .collect()
}

fn pet_agrees(r: &Z2Rotation, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (wx, wy) = (r.lattice.g1.x.to_f64(), r.lattice.g2.y.to_f64());
    let den = 1_000_003i64;
    for (gen, t) in [(Generator::E1, &r.alpha), (Generator::E2, &r.beta)] {
        let view = pet_view(r, gen);
        let mut checked = 0;
        while checked < 500 {
            let x = Vec2G::new(
                gq(rng.gen_range(0..(wx * den as f64) as i64), 0, den),
                gq(rng.gen_range(0..(wy * den as f64) as i64), 0, den),
            );
            if let Some(y) = view.apply(&x) {
                ensure(y == r.lattice.reduce(&(&x + t)), || {
                    format!("{gen:?} disagrees at {x}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(())
}

fn c10_pet() -> Outcome {
    let r0 = datasets::jr_rotation();
    let phi = G::phi();
    let va = Vec2G::from_ints(1, 0);
    let vb = Vec2G::new(&G::one() - &phi, G::zero());
    let vc = Vec2G::from_ints(0, 1);
    let vd = Vec2G::new(&phi - &G::one(), -g(2, 1));
    let ve = Vec2G::new(G::from_int(-1), -g(2, 1));
    let e1: BTreeSet<Vec2G> = [va, vb].into_iter().collect();
    let e2: BTreeSet<Vec2G> = [vc, vd, ve].into_iter().collect();
    ensure(translations(&r0, Generator::E1) == e1, || {
        format!("R₀ e1 translations {:?}", translations(&r0, Generator::E1))
    })?;
    ensure(translations(&r0, Generator::E2) == e2, || {
        format!("R₀ e2 translations {:?}", translations(&r0, Generator::E2))
    })?;
    pet_agrees(&r0, 101)?;

    let ru = datasets::u_rotation();
    let inv1 = g(-1, 1);
    let inv2 = g(2, -1);
    for (gen, axis) in [(Generator::E1, 0usize), (Generator::E2, 1)] {
        let view = pet_view(&ru, gen);
        ensure(view.pieces.len() == 2, || {
            format!("R_U {gen:?}: {} pieces", view.pieces.len())
        })?;
        for (piece, t) in &view.pieces {
            let (lo, hi) = piece.bbox();
            let (lo, hi, shift, other) = if axis == 0 {
                (lo.x, hi.x, t.x.clone(), t.y.clone())
            } else {
                (lo.y, hi.y, t.y.clone(), t.x.clone())
            };
            ensure(other.is_zero(), || format!("R_U {gen:?}: skew translation"))?;
            let ok = if shift == inv2 {
                lo.is_zero() && hi == inv1
            } else if shift == -&inv1 {
                lo == inv1 && hi == G::one()
            } else {
                false
            };
            ensure(ok, || {
                format!("R_U {gen:?}: piece [{lo}, {hi}] with shift {shift}")
            })?;
        }
    }
    pet_agrees(&ru, 103)?;
    Ok("R₀ gives v_a…v_e; R_U splits at φ⁻¹ with shifts φ⁻², −φ⁻¹; 500 points each agree".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("tile-set derivation", c1_derivation),
        ("exact frequencies", c2_frequencies),
        ("validity", c3_validity),
        ("model set = scan", c4_model_sets),
        ("star map", c5_star_map),
        ("complexity", c6_complexity),
        ("fibers", c7_fibers),
        ("aperiodicity evidence", c8_periods),
        ("sturmian", c9_sturmian),
        ("PET", c10_pet),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        report(k + 1, name, &o);
        if o.is_err() {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
