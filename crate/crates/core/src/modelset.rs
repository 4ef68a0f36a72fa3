//! 4-to-2 cut-and-project schemes, star maps, coding-region windows and
//! model-set occurrence sets.
//!
//! The star map is computed as the rotation orbit `apply(rotation, n, seed)`.
//! The 4-dimensional lift is kept so the projection formulas can be checked
//! against it. For the scheme of 𝒰 the fractional parts come out as
//! `{r + φ⁻²m}` = `{r − φm}`, which is what `R_U` produces.

use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;

use crate::dynamics::{
    check_direction, code_patch, sector_directions, DynError, Patch, Window, Z2Rotation,
};
use crate::goldenfield::{g, G};
use crate::torusgeom::{ConvexPolygon, GeomError, Lattice, Locator, Partition, Vec2G};

pub type Lift = [G; 4];

/// Projection data for R⁴/Λ, Λ = ⟨(1,−1,0,0), (0,0,1,−1)⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutProjectScheme {
    pub physical_map: [[G; 4]; 2],
    pub internal_map: [[G; 4]; 2],
    /// t with 𝓛 = Z⁴ + t; the lift of n is (n₁, 0, n₂, 0) + t.
    pub lattice_translate: Lift,
    pub seed: Vec2G,
    pub rotation: Z2Rotation,
}

fn physical_default() -> [[G; 4]; 2] {
    let (o, z) = (G::one(), G::zero());
    [
        [o.clone(), o.clone(), z.clone(), z.clone()],
        [z.clone(), z, o.clone(), o],
    ]
}

impl CutProjectScheme {
    /// Scheme whose star map is R₀ started at the seed (r, s).
    pub fn jeandel_rao(seed: Vec2G) -> Self {
        let rotation = crate::datasets::jr_rotation();
        let seed = rotation.lattice.reduce(&seed);
        let z = G::zero();
        let inv_phi = g(-1, 1);
        let internal = [
            [G::one(), -&inv_phi, z.clone(), inv_phi.clone()],
            [z.clone(), z.clone(), G::one(), -g(2, 1)],
        ];
        // seed = r'(φ, 0) + s'(1, φ+3)
        let s1 = &seed.y / &g(3, 1);
        let r1 = (&seed.x - &s1) / G::phi();
        let t = [&r1 + &s1, -(&r1 + &s1), s1.clone(), -&s1];
        CutProjectScheme {
            physical_map: physical_default(),
            internal_map: internal,
            lattice_translate: t,
            seed,
            rotation,
        }
    }

    /// Scheme whose star map is R_U started at the seed (r, s).
    pub fn u_scheme(seed: Vec2G) -> Self {
        let rotation = crate::datasets::u_rotation();
        let seed = rotation.lattice.reduce(&seed);
        let z = G::zero();
        let a = g(2, -1);
        let b = -g(-1, 1);
        let internal = [
            [a.clone(), b.clone(), z.clone(), z.clone()],
            [z.clone(), z, a, b],
        ];
        let t = [seed.x.clone(), -&seed.x, seed.y.clone(), -&seed.y];
        CutProjectScheme {
            physical_map: physical_default(),
            internal_map: internal,
            lattice_translate: t,
            seed,
            rotation,
        }
    }

    /// A representative of (π|_𝓛)⁻¹(n).
    pub fn lift(&self, n: (i64, i64)) -> Lift {
        let t = &self.lattice_translate;
        [
            &t[0] + &G::from_int(n.0),
            t[1].clone(),
            &t[2] + &G::from_int(n.1),
            t[3].clone(),
        ]
    }

    pub fn physical(&self, x: &Lift) -> Vec2G {
        apply_map(&self.physical_map, x)
    }

    /// π_int, reduced mod the rotation lattice.
    pub fn internal(&self, x: &Lift) -> Vec2G {
        self.rotation
            .lattice
            .reduce(&apply_map(&self.internal_map, x))
    }

    pub fn star_map(&self, n: (i64, i64)) -> Vec2G {
        self.rotation.apply(n, &self.seed)
    }
}

fn apply_map(m: &[[G; 4]; 2], x: &Lift) -> Vec2G {
    let dot = |r: &[G; 4]| (0..4).fold(G::zero(), |s, i| s + &r[i] * &x[i]);
    Vec2G::new(dot(&m[0]), dot(&m[1]))
}

pub fn star_map(c: &CutProjectScheme, n: (i64, i64)) -> Vec2G {
    c.star_map(n)
}

/// Acceptance window: a finite union of convex pieces in the fundamental
/// domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptanceWindow {
    pub pieces: Vec<ConvexPolygon>,
    lattice: Lattice,
}

impl AcceptanceWindow {
    pub fn new(pieces: Vec<ConvexPolygon>, lattice: Lattice) -> Self {
        AcceptanceWindow { pieces, lattice }
    }

    /// The coding region of a pattern, with the pattern re-anchored at the
    /// origin.
    pub fn from_pattern(r: &Z2Rotation, p: &Partition, pattern: &Patch<String>) -> Self {
        let region = crate::dynamics::coding_region(r, p, &pattern.with_origin((0, 0)));
        AcceptanceWindow::new(region, r.lattice.clone())
    }

    pub fn area(&self) -> G {
        self.pieces.iter().fold(G::zero(), |s, p| s + p.area())
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// The boundary as a finite list of segments.
    pub fn boundary_segments(&self) -> Vec<(Vec2G, Vec2G)> {
        self.pieces
            .iter()
            .flat_map(|p| {
                p.edges()
                    .map(|(a, b)| (a.clone(), b.clone()))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// Membership of x + εv on the torus.
    pub fn contains_perturbed(&self, x: &Vec2G, v: &Vec2G) -> Result<bool, GeomError> {
        let r = self.lattice.reduce_perturbed(x, v);
        for p in &self.pieces {
            if p.contains_perturbed(&r, v)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Positions n in the rectangle with R^n(seed) + εv in the coding region of
/// the pattern, i.e. where the pattern occurs in SymbRep^v.
pub fn occurrences(
    c: &CutProjectScheme,
    p: &Partition,
    pattern: &Patch<String>,
    v: &Vec2G,
    rect: Window,
) -> Result<BTreeSet<(i64, i64)>, DynError> {
    check_direction(p, v)?;
    let w = AcceptanceWindow::from_pattern(&c.rotation, p, pattern);
    occurrences_in_window(c, &w, v, rect)
}

pub fn occurrences_in_window(
    c: &CutProjectScheme,
    w: &AcceptanceWindow,
    v: &Vec2G,
    rect: Window,
) -> Result<BTreeSet<(i64, i64)>, DynError> {
    let pos: Vec<(i64, i64)> = rect.positions().collect();
    let hits: Vec<Option<(i64, i64)>> = pos
        .par_iter()
        .map(|&n| {
            let x = c.star_map(n);
            w.contains_perturbed(&x, v)
                .map(|b| if b { Some(n) } else { None })
        })
        .collect::<Result<_, GeomError>>()?;
    Ok(hits.into_iter().flatten().collect())
}

/// Positions in the rectangle where the pattern appears in the coded patch;
/// the scan oracle for [`occurrences`].
pub fn scan_occurrences(
    c: &CutProjectScheme,
    p: &Partition,
    pattern: &Patch<String>,
    v: &Vec2G,
    rect: Window,
) -> Result<BTreeSet<(i64, i64)>, DynError> {
    let big = Window::new(
        rect.origin,
        rect.width + pattern.width - 1,
        rect.height + pattern.height - 1,
    );
    let coded = code_patch(&c.rotation, p, &c.seed, v, big)?;
    Ok(scan_in_patch(&coded, pattern, rect))
}

/// Positions n of the rectangle with coded[n + k] = pattern[k] for every k.
pub fn scan_in_patch<L: PartialEq + Clone>(
    coded: &Patch<L>,
    pattern: &Patch<L>,
    rect: Window,
) -> BTreeSet<(i64, i64)> {
    rect.positions()
        .filter(|&n| {
            (0..pattern.height).all(|j| {
                (0..pattern.width)
                    .all(|i| coded.get((n.0 + i as i64, n.1 + j as i64)) == Some(pattern.at(i, j)))
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Classification {
    Generic { horizon: usize },
    Singular { n: (i64, i64), edge: (Vec2G, Vec2G) },
}

/// Orbit positions in max-norm rings, lexicographic within a ring.
pub fn ring_positions(radius: usize) -> Vec<(i64, i64)> {
    let r = radius as i64;
    if r == 0 {
        return vec![(0, 0)];
    }
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            if a.abs().max(b.abs()) == r {
                out.push((a, b));
            }
        }
    }
    out
}

/// First n (max-norm ≤ horizon) whose orbit point lies on a boundary
/// between distinct atoms; otherwise generic up to the horizon.
pub fn classify_up_to(
    c: &CutProjectScheme,
    p: &Partition,
    x: &Vec2G,
    horizon: usize,
) -> Classification {
    classify_orbit(&c.rotation, p, x, horizon)
}

pub fn classify_orbit(r: &Z2Rotation, p: &Partition, x: &Vec2G, horizon: usize) -> Classification {
    let loc = Locator::new(p);
    let dirs = sector_directions(p);
    for rad in 0..=horizon {
        for n in ring_positions(rad) {
            let y = r.apply(n, x);
            if let Some(edge) = loc.on_any_edge(&y) {
                let labels: BTreeSet<usize> = dirs
                    .iter()
                    .filter_map(|v| loc.locate_index(&y, v).ok())
                    .collect();
                if labels.len() > 1 {
                    return Classification::Singular { n, edge };
                }
            }
        }
    }
    Classification::Generic { horizon }
}

/// Samples points with coordinates k/10⁶ in the fundamental rectangle until
/// one is generic up to the horizon.
pub fn sample_generic_point<R: Rng>(
    r: &Z2Rotation,
    p: &Partition,
    horizon: usize,
    rng: &mut R,
) -> Vec2G {
    const DEN: i64 = 1_000_000;
    let wx = (r.lattice.g1.x.to_f64() * DEN as f64).floor() as i64;
    let wy = (r.lattice.g2.y.to_f64() * DEN as f64).floor() as i64;
    loop {
        let x = Vec2G::new(
            G::from_ratio(rng.gen_range(0..wx), DEN),
            G::from_ratio(rng.gen_range(0..wy), DEN),
        );
        if matches!(
            classify_orbit(r, p, &x, horizon),
            Classification::Generic { .. }
        ) {
            return x;
        }
    }
}
