//! Toroidal Z²-rotations, orbit coding, coding regions, shape refinements,
//! polygon exchange views and the fiber experiment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::goldenfield::G;
use crate::torusgeom::{
    clip, convex_hull, edge_directions, refine_with, translate_mod, translate_mod_tracked,
    ConvexPolygon, GeomError, Lattice, Locator, Partition, Vec2G,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("direction {0} is parallel to an edge of the partition")]
    InvalidDirection(String),
    #[error("patch format: {0}")]
    Format(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
}

/// R^n(x) = x + n₁α + n₂β mod Γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Z2Rotation {
    pub lattice: Lattice,
    pub alpha: Vec2G,
    pub beta: Vec2G,
}

impl Z2Rotation {
    pub fn new(lattice: Lattice, alpha: Vec2G, beta: Vec2G) -> Self {
        let alpha = lattice.reduce(&alpha);
        let beta = lattice.reduce(&beta);
        Z2Rotation {
            lattice,
            alpha,
            beta,
        }
    }

    /// The translation vector n₁α + n₂β before reduction.
    pub fn vector(&self, n: (i64, i64)) -> Vec2G {
        &(n.0 * &self.alpha) + &(n.1 * &self.beta)
    }

    pub fn apply(&self, n: (i64, i64), x: &Vec2G) -> Vec2G {
        self.lattice.reduce(&(x + &self.vector(n)))
    }
}

pub fn apply(r: &Z2Rotation, n: (i64, i64), x: &Vec2G) -> Vec2G {
    r.apply(n, x)
}

/// Axis-aligned window of Z².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub origin: (i64, i64),
    pub width: usize,
    pub height: usize,
}

impl Window {
    pub fn new(origin: (i64, i64), width: usize, height: usize) -> Self {
        Window {
            origin,
            width,
            height,
        }
    }

    /// Square [−r, r]².
    pub fn centered(radius: usize) -> Self {
        let r = radius as i64;
        Window::new((-r, -r), 2 * radius + 1, 2 * radius + 1)
    }

    pub fn shifted(&self, k: (i64, i64)) -> Self {
        Window::new(
            (self.origin.0 + k.0, self.origin.1 + k.1),
            self.width,
            self.height,
        )
    }

    /// Positions in row-major order from the bottom row.
    pub fn positions(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (0..self.height as i64).flat_map(move |j| {
            (0..self.width as i64).map(move |i| (self.origin.0 + i, self.origin.1 + j))
        })
    }

    pub fn contains(&self, n: (i64, i64)) -> bool {
        n.0 >= self.origin.0
            && n.1 >= self.origin.1
            && n.0 < self.origin.0 + self.width as i64
            && n.1 < self.origin.1 + self.height as i64
    }
}

/// Finite rectangular restriction of a configuration; cells are stored
/// row-major with row 0 at the bottom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Patch<L = String> {
    pub origin: (i64, i64),
    pub width: usize,
    pub height: usize,
    pub cells: Vec<L>,
}

impl<L: Clone> Patch<L> {
    pub fn new(origin: (i64, i64), width: usize, height: usize, cells: Vec<L>) -> Self {
        assert_eq!(
            cells.len(),
            width * height,
            "cell count must be width·height"
        );
        Patch {
            origin,
            width,
            height,
            cells,
        }
    }

    /// Builds from columns listed left to right, each bottom to top.
    pub fn from_columns(origin: (i64, i64), columns: &[Vec<L>]) -> Self {
        let width = columns.len();
        let height = columns.first().map_or(0, Vec::len);
        let mut cells = Vec::with_capacity(width * height);
        for j in 0..height {
            for c in columns {
                cells.push(c[j].clone());
            }
        }
        Patch::new(origin, width, height, cells)
    }

    pub fn window(&self) -> Window {
        Window::new(self.origin, self.width, self.height)
    }

    /// Cell at absolute position n.
    pub fn get(&self, n: (i64, i64)) -> Option<&L> {
        let i = n.0 - self.origin.0;
        let j = n.1 - self.origin.1;
        if i < 0 || j < 0 || i >= self.width as i64 || j >= self.height as i64 {
            return None;
        }
        Some(&self.cells[j as usize * self.width + i as usize])
    }

    /// Cell at offset (i, j) from the origin.
    pub fn at(&self, i: usize, j: usize) -> &L {
        &self.cells[j * self.width + i]
    }

    /// The same cells with origin moved to o.
    pub fn with_origin(&self, o: (i64, i64)) -> Self {
        Patch::new(o, self.width, self.height, self.cells.clone())
    }

    /// Entries as (absolute position, label).
    pub fn entries(&self) -> impl Iterator<Item = ((i64, i64), &L)> + '_ {
        self.window()
            .positions()
            .zip(self.cells.iter())
            .collect::<Vec<_>>()
            .into_iter()
    }

    /// Sub-patch over a window contained in this one.
    pub fn restrict(&self, w: Window) -> Option<Self> {
        let cells = w
            .positions()
            .map(|n| self.get(n).cloned())
            .collect::<Option<Vec<L>>>()?;
        Some(Patch::new(w.origin, w.width, w.height, cells))
    }

    pub fn map<M: Clone>(&self, f: impl Fn(&L) -> M) -> Patch<M> {
        Patch::new(
            self.origin,
            self.width,
            self.height,
            self.cells.iter().map(f).collect(),
        )
    }
}

impl<L: fmt::Display + Clone> Patch<L> {
    /// Text form: header `ox oy w h`, then rows top first, bottom row last.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} {} {} {}\n",
            self.origin.0, self.origin.1, self.width, self.height
        );
        for j in (0..self.height).rev() {
            let row: Vec<String> = (0..self.width).map(|i| self.at(i, j).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

impl<L: FromStr + Clone> Patch<L> {
    pub fn from_text(text: &str) -> Result<Self, DynError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| DynError::Format("empty input".into()))?;
        let h: Vec<i64> = header
            .split_whitespace()
            .map(|t| t.parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|e| DynError::Format(format!("header: {}", e)))?;
        if h.len() != 4 || h[2] <= 0 || h[3] <= 0 {
            return Err(DynError::Format("header must be `ox oy w h`".into()));
        }
        let (w, ht) = (h[2] as usize, h[3] as usize);
        let mut rows: Vec<Vec<L>> = Vec::new();
        for l in lines {
            let row = l
                .split_whitespace()
                .map(|t| {
                    t.parse::<L>()
                        .map_err(|_| DynError::Format(format!("bad label {:?}", t)))
                })
                .collect::<Result<Vec<L>, _>>()?;
            if row.len() != w {
                return Err(DynError::Format(format!(
                    "row has {} labels, expected {}",
                    row.len(),
                    w
                )));
            }
            rows.push(row);
        }
        if rows.len() != ht {
            return Err(DynError::Format(format!(
                "found {} rows, expected {}",
                rows.len(),
                ht
            )));
        }
        rows.reverse();
        Ok(Patch::new(
            (h[0], h[1]),
            w,
            ht,
            rows.into_iter().flatten().collect(),
        ))
    }
}

/// Finite support S ⊂ Z².
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    offsets: Vec<(i64, i64)>,
}

impl Shape {
    pub fn new(offsets: Vec<(i64, i64)>) -> Result<Self, DynError> {
        if offsets.is_empty() {
            return Err(DynError::InvalidShape("empty".into()));
        }
        let set: BTreeSet<_> = offsets.iter().collect();
        if set.len() != offsets.len() {
            return Err(DynError::InvalidShape("duplicate offsets".into()));
        }
        Ok(Shape { offsets })
    }

    /// w × h rectangle anchored at the origin, bottom row first.
    pub fn rect(w: usize, h: usize) -> Self {
        Shape::new(Window::new((0, 0), w, h).positions().collect()).expect("nonempty rectangle")
    }

    pub fn offsets(&self) -> &[(i64, i64)] {
        &self.offsets
    }
}

/// Checks that v avoids every edge direction of P.
pub fn check_direction(p: &Partition, v: &Vec2G) -> Result<(), DynError> {
    if v.is_zero() || crate::torusgeom::is_edge_direction(p, v) {
        return Err(DynError::InvalidDirection(v.to_string()));
    }
    Ok(())
}

/// Default perturbation direction (1, 1/2).
pub fn default_direction() -> Vec2G {
    Vec2G::new(G::one(), G::from_ratio(1, 2))
}

/// Cell indices (into `P.atoms`) of the coding of x over a window.
pub fn code_patch_atoms(
    r: &Z2Rotation,
    p: &Partition,
    x: &Vec2G,
    v: &Vec2G,
    w: Window,
) -> Result<Patch<usize>, DynError> {
    check_direction(p, v)?;
    let loc = Locator::new(p);
    code_with_locator(r, &loc, x, v, w)
}

pub(crate) fn code_with_locator(
    r: &Z2Rotation,
    loc: &Locator,
    x: &Vec2G,
    v: &Vec2G,
    w: Window,
) -> Result<Patch<usize>, DynError> {
    let rows: Vec<Vec<usize>> = (0..w.height as i64)
        .into_par_iter()
        .map(|j| {
            let n2 = w.origin.1 + j;
            // walk the row by adding α instead of recomputing each point
            let mut y = r.apply((w.origin.0, n2), x);
            let mut row = Vec::with_capacity(w.width);
            for i in 0..w.width {
                if i > 0 {
                    y = r.lattice.reduce(&(&y + &r.alpha));
                }
                row.push(loc.locate_index(&y, v)?);
            }
            Ok(row)
        })
        .collect::<Result<_, GeomError>>()?;
    Ok(Patch::new(
        w.origin,
        w.width,
        w.height,
        rows.into_iter().flatten().collect(),
    ))
}

/// Labels of the SymbRep^v coding of the orbit of x over a window.
pub fn code_patch(
    r: &Z2Rotation,
    p: &Partition,
    x: &Vec2G,
    v: &Vec2G,
    w: Window,
) -> Result<Patch<String>, DynError> {
    let idx = code_patch_atoms(r, p, x, v, w)?;
    Ok(idx.map(|&i| p.atoms[i].label.clone()))
}

fn pullback_pieces(r: &Z2Rotation, pieces: &[ConvexPolygon], n: (i64, i64)) -> Vec<ConvexPolygon> {
    let t = -&r.vector(n);
    pieces
        .iter()
        .flat_map(|q| translate_mod(q, &t, &r.lattice))
        .collect()
}

fn intersect_unions(a: &[ConvexPolygon], b: &[ConvexPolygon]) -> Vec<ConvexPolygon> {
    let mut out = Vec::new();
    for p in a {
        for q in b {
            if let Some(c) = clip(p, q) {
                out.push(c);
            }
        }
    }
    out
}

/// ∩ over cells n of R^{−n}(closure of the atom labeled patch[n]).
pub fn coding_region(r: &Z2Rotation, p: &Partition, patch: &Patch<String>) -> Vec<ConvexPolygon> {
    let mut region: Option<Vec<ConvexPolygon>> = None;
    for (n, label) in patch.entries() {
        let atom = match p.atom(label) {
            Some(a) => a,
            None => return Vec::new(),
        };
        let pulled = pullback_pieces(r, &atom.pieces, n);
        region = Some(match region {
            None => pulled,
            Some(cur) => intersect_unions(&cur, &pulled),
        });
        if region.as_ref().is_some_and(Vec::is_empty) {
            return Vec::new();
        }
    }
    region.unwrap_or_default()
}

/// Separator used in labels of shape refinements.
pub const PATTERN_SEP: &str = ",";

/// Refinement ⋀_{k∈S} R^{−k}(P); atoms are labeled by the S-patterns, the
/// labels of the offsets in shape order joined with [`PATTERN_SEP`].
pub fn refine_over_shape(r: &Z2Rotation, p: &Partition, s: &Shape) -> Partition {
    let mut acc: Option<Partition> = None;
    for &k in s.offsets() {
        let pulled = p.translate(&-&r.vector(k));
        acc = Some(match acc {
            None => pulled,
            Some(cur) => refine_with(&cur, &pulled, |a, b| format!("{}{}{}", a, PATTERN_SEP, b))
                .expect("same lattice"),
        });
    }
    acc.expect("nonempty shape")
}

pub fn pattern_count(r: &Z2Rotation, p: &Partition, s: &Shape) -> usize {
    refine_over_shape(r, p, s).atoms.len()
}

/// Allowed S-patterns as label lists in shape order.
pub fn allowed_patterns(r: &Z2Rotation, p: &Partition, s: &Shape) -> BTreeSet<Vec<String>> {
    refine_over_shape(r, p, s)
        .atoms
        .iter()
        .map(|a| a.label.split(PATTERN_SEP).map(str::to_string).collect())
        .collect()
}

/// Distinct S-patterns occurring in a patch.
pub fn scan_patterns<L: Clone + Ord>(patch: &Patch<L>, s: &Shape) -> BTreeSet<Vec<L>> {
    let mut out = BTreeSet::new();
    for n in patch.window().positions() {
        let pat: Option<Vec<L>> = s
            .offsets()
            .iter()
            .map(|k| patch.get((n.0 + k.0, n.1 + k.1)).cloned())
            .collect();
        if let Some(pat) = pat {
            out.insert(pat);
        }
    }
    out
}

/// One direction strictly inside each sector cut out by the lines of Θ^P.
pub fn sector_directions(p: &Partition) -> Vec<Vec2G> {
    let mut rays: Vec<Vec2G> = Vec::new();
    for d in edge_directions(p) {
        rays.push(-&d);
        rays.push(d);
    }
    rays.sort_by(angle_cmp);
    let n = rays.len();
    (0..n).map(|i| &rays[i] + &rays[(i + 1) % n]).collect()
}

fn half(v: &Vec2G) -> i32 {
    // 0 for angles in [0, π), 1 for [π, 2π)
    if v.y.signum() > 0 || (v.y.is_zero() && v.x.signum() > 0) {
        0
    } else {
        1
    }
}

fn angle_cmp(a: &Vec2G, b: &Vec2G) -> std::cmp::Ordering {
    half(a)
        .cmp(&half(b))
        .then_with(|| 0.cmp(&a.cross(b).signum()))
}

/// Distinct square patches of the given radius coded from x with each
/// direction; a lower bound for the fiber cardinality over x.
pub fn fiber_signatures(
    r: &Z2Rotation,
    p: &Partition,
    x: &Vec2G,
    radius: usize,
    directions: &[Vec2G],
) -> Result<BTreeSet<Patch<String>>, DynError> {
    let loc = Locator::new(p);
    let mut out = BTreeSet::new();
    for v in directions {
        check_direction(p, v)?;
        let idx = code_with_locator(r, &loc, x, v, Window::centered(radius))?;
        out.insert(idx.map(|&i| p.atoms[i].label.clone()));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    E1,
    E2,
}

/// The map x ↦ R^{e_i}(x) as a polygon exchange.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PETView {
    pub generator: Generator,
    pub pieces: Vec<(ConvexPolygon, Vec2G)>,
}

impl PETView {
    /// Image of an interior point, or None when x lies on a piece boundary.
    pub fn apply(&self, x: &Vec2G) -> Option<Vec2G> {
        self.pieces
            .iter()
            .find(|(p, _)| p.contains_interior(x))
            .map(|(_, t)| x + t)
    }
}

pub fn pet_view(r: &Z2Rotation, generator: Generator) -> PETView {
    let g = match generator {
        Generator::E1 => &r.alpha,
        Generator::E2 => &r.beta,
    };
    let dom = r.lattice.domain();
    let mut groups: BTreeMap<Vec2G, Vec<ConvexPolygon>> = BTreeMap::new();
    for (reduced, gamma) in translate_mod_tracked(&dom, g, &r.lattice) {
        let t = g - &gamma;
        let source = reduced.translate(&-&t);
        groups.entry(t).or_default().push(source);
    }
    let mut pieces = Vec::new();
    for (t, mut polys) in groups {
        merge_convex(&mut polys);
        for p in polys {
            pieces.push((p, t.clone()));
        }
    }
    pieces.sort_by(|a, b| {
        let (ca, cb) = (a.0.centroid(), b.0.centroid());
        (ca.y, ca.x).cmp(&(cb.y, cb.x))
    });
    PETView { generator, pieces }
}

/// Repeatedly merges pairs whose union is convex.
fn merge_convex(polys: &mut Vec<ConvexPolygon>) {
    'outer: loop {
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                let mut pts = polys[i].vertices().to_vec();
                pts.extend_from_slice(polys[j].vertices());
                if let Some(h) = convex_hull(&pts) {
                    if h.area() == polys[i].area() + polys[j].area() {
                        polys[i] = h;
                        polys.remove(j);
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
}

/// Frequencies of atoms: areas normalized by the covolume.
pub fn frequencies(p: &Partition) -> Vec<(String, G)> {
    let cov = p.lattice.covolume();
    p.atoms
        .iter()
        .map(|a| (a.label.clone(), a.area() / &cov))
        .collect()
}
