//! Exact planar and toroidal geometry over the golden field.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};
use thiserror::Error;

use crate::goldenfield::{GoldenNumber, G};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("degenerate lattice")]
    DegenerateLattice,
    #[error("lattice not in lower-triangular normal form")]
    NotNormalForm,
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("partitions live on different lattices")]
    LatticeMismatch,
    #[error("direction {v} is parallel to a boundary edge through {x}")]
    DirectionInBoundary { x: String, v: String },
    #[error("point {0} is not covered by any atom")]
    NotCovered(String),
    #[error("zero direction")]
    ZeroDirection,
    #[error("partition file: {0}")]
    Format(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

/// Point or vector with golden-field coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vec2G {
    pub x: GoldenNumber,
    pub y: GoldenNumber,
}

impl Vec2G {
    pub fn new(x: GoldenNumber, y: GoldenNumber) -> Self {
        Vec2G { x, y }
    }

    pub fn zero() -> Self {
        Vec2G::default()
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Vec2G::new(G::from_int(x), G::from_int(y))
    }

    pub fn cross(&self, o: &Vec2G) -> GoldenNumber {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Vec2G) -> GoldenNumber {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn scale(&self, s: &GoldenNumber) -> Vec2G {
        Vec2G::new(&self.x * s, &self.y * s)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Display for Vec2G {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add<&Vec2G> for &Vec2G {
    type Output = Vec2G;
    fn add(self, o: &Vec2G) -> Vec2G {
        Vec2G::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub<&Vec2G> for &Vec2G {
    type Output = Vec2G;
    fn sub(self, o: &Vec2G) -> Vec2G {
        Vec2G::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Add for Vec2G {
    type Output = Vec2G;
    fn add(self, o: Vec2G) -> Vec2G {
        &self + &o
    }
}

impl Sub for Vec2G {
    type Output = Vec2G;
    fn sub(self, o: Vec2G) -> Vec2G {
        &self - &o
    }
}

impl Neg for &Vec2G {
    type Output = Vec2G;
    fn neg(self) -> Vec2G {
        Vec2G::new(-&self.x, -&self.y)
    }
}

impl Mul<&Vec2G> for i64 {
    type Output = Vec2G;
    fn mul(self, v: &Vec2G) -> Vec2G {
        v.scale(&G::from_int(self))
    }
}

/// Lattice Γ = ⟨g1, g2⟩ in lower-triangular normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    pub g1: Vec2G,
    pub g2: Vec2G,
}

impl Lattice {
    pub fn new(g1: Vec2G, g2: Vec2G) -> Result<Self, GeomError> {
        if g1.cross(&g2).is_zero() {
            return Err(GeomError::DegenerateLattice);
        }
        if !g1.y.is_zero() || g1.x.signum() <= 0 || g2.y.signum() <= 0 {
            return Err(GeomError::NotNormalForm);
        }
        Ok(Lattice { g1, g2 })
    }

    /// The square lattice Z².
    pub fn square() -> Self {
        Lattice::new(Vec2G::from_ints(1, 0), Vec2G::from_ints(0, 1)).unwrap()
    }

    pub fn covolume(&self) -> GoldenNumber {
        self.g1.cross(&self.g2).abs()
    }

    pub fn vector(&self, k: i64, l: i64) -> Vec2G {
        &(k * &self.g1) + &(l * &self.g2)
    }

    /// Fundamental rectangle [0, g1.x) × [0, g2.y) as a polygon.
    pub fn domain(&self) -> ConvexPolygon {
        ConvexPolygon::rectangle(&G::zero(), &G::zero(), &self.g1.x, &self.g2.y)
    }

    /// Lattice coordinates (k, ℓ) of the cell holding x.
    pub fn cell_of(&self, x: &Vec2G) -> (i64, i64) {
        let l = (&x.y / &self.g2.y).floor_i64();
        let k = ((&x.x - &self.g2.x.clone().mul_int(l)) / &self.g1.x).floor_i64();
        (k, l)
    }

    /// Representative of x mod Γ in the fundamental rectangle.
    pub fn reduce(&self, x: &Vec2G) -> Vec2G {
        let (k, l) = self.cell_of(x);
        if k == 0 && l == 0 {
            return x.clone();
        }
        x - &self.vector(k, l)
    }

    /// Representative r of x mod Γ such that r + εv lies in the fundamental
    /// rectangle for all small ε > 0.
    pub fn reduce_perturbed(&self, x: &Vec2G, v: &Vec2G) -> Vec2G {
        let ty = &x.y / &self.g2.y;
        let mut l = ty.floor_i64();
        if ty.is_integer() && v.y.signum() < 0 {
            l -= 1;
        }
        let rx = &x.x - &self.g2.x.clone().mul_int(l);
        let tx = &rx / &self.g1.x;
        let mut k = tx.floor_i64();
        if tx.is_integer() && v.x.signum() < 0 {
            k -= 1;
        }
        x - &self.vector(k, l)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "g1": [self.g1.x.to_serial(), self.g1.y.to_serial()],
            "g2": [self.g2.x.to_serial(), self.g2.y.to_serial()],
        })
    }
}

trait MulInt {
    fn mul_int(self, n: i64) -> GoldenNumber;
}

impl MulInt for GoldenNumber {
    fn mul_int(self, n: i64) -> GoldenNumber {
        self * G::from_int(n)
    }
}

/// Strictly convex counterclockwise polygon.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2G>,
}

impl ConvexPolygon {
    /// Validates ≥ 3 vertices, strict convexity and counterclockwise order.
    pub fn new(vertices: Vec<Vec2G>) -> Result<Self, GeomError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::InvalidPolygon("fewer than 3 vertices".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                if vertices[i] == vertices[j] {
                    return Err(GeomError::InvalidPolygon("repeated vertex".into()));
                }
            }
        }
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            let c = &vertices[(i + 2) % n];
            if (b - a).cross(&(c - b)).signum() <= 0 {
                return Err(GeomError::InvalidPolygon(
                    "not strictly convex counterclockwise".into(),
                ));
            }
        }
        // a star polygon passes the local turn test but winds more than once
        let mut winding = G::zero();
        for i in 0..n {
            winding = winding + vertices[i].cross(&vertices[(i + 1) % n]);
        }
        if winding.signum() <= 0 {
            return Err(GeomError::InvalidPolygon("not counterclockwise".into()));
        }
        let p = ConvexPolygon { vertices };
        if !p.is_simple_convex() {
            return Err(GeomError::InvalidPolygon("self-intersecting".into()));
        }
        Ok(p)
    }

    fn is_simple_convex(&self) -> bool {
        // every vertex lies strictly left of every non-incident edge
        let n = self.vertices.len();
        for i in 0..n {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            let e = b - a;
            for j in 0..n {
                if j == i || j == (i + 1) % n {
                    continue;
                }
                if e.cross(&(&self.vertices[j] - a)).signum() <= 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Builds from possibly degenerate vertex lists: drops repeated and
    /// collinear vertices; returns None if no positive area remains.
    pub fn from_points_cleaned(pts: Vec<Vec2G>) -> Option<Self> {
        let mut v: Vec<Vec2G> = Vec::with_capacity(pts.len());
        for p in pts {
            if v.last() != Some(&p) {
                v.push(p);
            }
        }
        while v.len() > 1 && v.first() == v.last() {
            v.pop();
        }
        loop {
            let n = v.len();
            if n < 3 {
                return None;
            }
            let mut removed = false;
            for i in 0..n {
                let a = &v[(i + n - 1) % n];
                let b = &v[i];
                let c = &v[(i + 1) % n];
                if (b - a).cross(&(c - b)).is_zero() {
                    v.remove(i);
                    removed = true;
                    break;
                }
            }
            if !removed {
                break;
            }
        }
        let p = ConvexPolygon { vertices: v };
        if p.signed_area2().signum() > 0 {
            Some(p)
        } else {
            None
        }
    }

    pub fn rectangle(x0: &G, y0: &G, x1: &G, y1: &G) -> Self {
        ConvexPolygon::new(vec![
            Vec2G::new(x0.clone(), y0.clone()),
            Vec2G::new(x1.clone(), y0.clone()),
            Vec2G::new(x1.clone(), y1.clone()),
            Vec2G::new(x0.clone(), y1.clone()),
        ])
        .expect("rectangle with positive extent")
    }

    pub fn vertices(&self) -> &[Vec2G] {
        &self.vertices
    }

    /// Directed edges (start, end) in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (&Vec2G, &Vec2G)> {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    fn signed_area2(&self) -> GoldenNumber {
        let n = self.vertices.len();
        let mut s = G::zero();
        for i in 0..n {
            s = s + self.vertices[i].cross(&self.vertices[(i + 1) % n]);
        }
        s
    }

    pub fn area(&self) -> GoldenNumber {
        self.signed_area2() / G::from_int(2)
    }

    pub fn translate(&self, t: &Vec2G) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|p| p + t).collect(),
        }
    }

    pub fn centroid(&self) -> Vec2G {
        // area-weighted centroid via triangle fan
        let o = &self.vertices[0];
        let mut cx = G::zero();
        let mut cy = G::zero();
        let mut a2 = G::zero();
        for i in 1..self.vertices.len() - 1 {
            let p = &self.vertices[i];
            let q = &self.vertices[i + 1];
            let w = (p - o).cross(&(q - o));
            cx = cx + &w * &(&o.x + &p.x + &q.x);
            cy = cy + &w * &(&o.y + &p.y + &q.y);
            a2 = a2 + w;
        }
        let d = a2 * G::from_int(3);
        Vec2G::new(cx / &d, cy / &d)
    }

    /// Min and max corners of the bounding box.
    pub fn bbox(&self) -> (Vec2G, Vec2G) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for p in &self.vertices[1..] {
            if p.x < lo.x {
                lo.x = p.x.clone();
            }
            if p.y < lo.y {
                lo.y = p.y.clone();
            }
            if p.x > hi.x {
                hi.x = p.x.clone();
            }
            if p.y > hi.y {
                hi.y = p.y.clone();
            }
        }
        (lo, hi)
    }

    /// Closed containment.
    pub fn contains_closed(&self, x: &Vec2G) -> bool {
        self.edges()
            .all(|(a, b)| (b - a).cross(&(x - a)).signum() >= 0)
    }

    /// Open containment.
    pub fn contains_interior(&self, x: &Vec2G) -> bool {
        self.edges()
            .all(|(a, b)| (b - a).cross(&(x - a)).signum() > 0)
    }

    /// Does the closed segment a–b of some edge contain x?
    pub fn on_boundary(&self, x: &Vec2G) -> bool {
        self.contains_closed(x) && !self.contains_interior(x)
    }

    /// Membership of x + εv for all small ε > 0.
    pub fn contains_perturbed(&self, x: &Vec2G, v: &Vec2G) -> Result<bool, GeomError> {
        let mut tangent = false;
        for (a, b) in self.edges() {
            let e = b - a;
            let mut s = e.cross(&(x - a)).signum();
            if s == 0 {
                s = e.cross(v).signum();
                if s == 0 {
                    tangent = true;
                    continue;
                }
            }
            if s < 0 {
                return Ok(false);
            }
        }
        if tangent {
            return Err(GeomError::DirectionInBoundary {
                x: x.to_string(),
                v: v.to_string(),
            });
        }
        Ok(true)
    }

    /// Same polygon up to cyclic relabeling of vertices.
    pub fn same_as(&self, other: &ConvexPolygon) -> bool {
        let n = self.vertices.len();
        if n != other.vertices.len() {
            return false;
        }
        match other.vertices.iter().position(|p| *p == self.vertices[0]) {
            None => false,
            Some(s) => (0..n).all(|i| self.vertices[i] == other.vertices[(s + i) % n]),
        }
    }

    /// Keep the part where n·x ≥ c (closed half-plane), or None if it has
    /// zero area.
    pub fn clip_halfplane(&self, n: &Vec2G, c: &GoldenNumber) -> Option<ConvexPolygon> {
        let vals: Vec<GoldenNumber> = self.vertices.iter().map(|p| n.dot(p) - c).collect();
        let signs: Vec<i32> = vals.iter().map(|v| v.signum()).collect();
        if signs.iter().all(|&s| s >= 0) {
            return Some(self.clone());
        }
        if signs.iter().all(|&s| s <= 0) {
            return None;
        }
        let m = self.vertices.len();
        let mut out = Vec::with_capacity(m + 2);
        for i in 0..m {
            let j = (i + 1) % m;
            let (p, q) = (&self.vertices[i], &self.vertices[j]);
            if signs[i] >= 0 {
                out.push(p.clone());
            }
            if (signs[i] > 0 && signs[j] < 0) || (signs[i] < 0 && signs[j] > 0) {
                let t = &vals[i] / &(&vals[i] - &vals[j]);
                out.push(p + &(q - p).scale(&t));
            }
        }
        ConvexPolygon::from_points_cleaned(out)
    }
}

impl fmt::Display for ConvexPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

pub fn area(p: &ConvexPolygon) -> GoldenNumber {
    p.area()
}

fn bbox_disjoint(p: &ConvexPolygon, q: &ConvexPolygon) -> bool {
    let (plo, phi) = p.bbox();
    let (qlo, qhi) = q.bbox();
    phi.x <= qlo.x || qhi.x <= plo.x || phi.y <= qlo.y || qhi.y <= plo.y
}

/// Exact intersection of two closed convex polygons; None when the
/// intersection has zero area.
pub fn clip(p: &ConvexPolygon, q: &ConvexPolygon) -> Option<ConvexPolygon> {
    if bbox_disjoint(p, q) {
        return None;
    }
    let mut cur = p.clone();
    for (a, b) in q.edges() {
        let e = b - a;
        let n = Vec2G::new(-&e.y, e.x.clone());
        let c = n.dot(a);
        cur = cur.clip_halfplane(&n, &c)?;
    }
    Some(cur)
}

/// Convex hull (counterclockwise, strictly convex) of a point set.
pub fn convex_hull(points: &[Vec2G]) -> Option<ConvexPolygon> {
    let mut pts: Vec<Vec2G> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return None;
    }
    let turn = |o: &Vec2G, a: &Vec2G, b: &Vec2G| (a - o).cross(&(b - o)).signum();
    let mut lower: Vec<Vec2G> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec2G> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    ConvexPolygon::from_points_cleaned(lower)
}

/// Pieces of p + t cut along the fundamental cells, each paired with the
/// lattice vector γ that was subtracted to bring it back into the domain.
pub fn translate_mod_tracked(
    p: &ConvexPolygon,
    t: &Vec2G,
    lattice: &Lattice,
) -> Vec<(ConvexPolygon, Vec2G)> {
    let q = p.translate(t);
    let (lo, hi) = q.bbox();
    let l0 = (&lo.y / &lattice.g2.y).floor_i64();
    let l1 = (&hi.y / &lattice.g2.y).floor_i64();
    let ex = Vec2G::from_ints(1, 0);
    let ey = Vec2G::from_ints(0, 1);
    let mut out = Vec::new();
    for l in l0..=l1 {
        let ylo = lattice.g2.y.clone() * G::from_int(l);
        let yhi = &ylo + &lattice.g2.y;
        let row = match q
            .clip_halfplane(&ey, &ylo)
            .and_then(|r| r.clip_halfplane(&-&ey, &-&yhi))
        {
            Some(r) => r.translate(&-&(l * &lattice.g2)),
            None => continue,
        };
        let (rlo, rhi) = row.bbox();
        let k0 = (&rlo.x / &lattice.g1.x).floor_i64();
        let k1 = (&rhi.x / &lattice.g1.x).floor_i64();
        for k in k0..=k1 {
            let xlo = lattice.g1.x.clone() * G::from_int(k);
            let xhi = &xlo + &lattice.g1.x;
            if let Some(c) = row
                .clip_halfplane(&ex, &xlo)
                .and_then(|r| r.clip_halfplane(&-&ex, &-&xhi))
            {
                let gamma = lattice.vector(k, l);
                out.push((c.translate(&-&(k * &lattice.g1)), gamma));
            }
        }
    }
    out
}

/// Translate p by t on the torus, re-cut into the fundamental rectangle.
pub fn translate_mod(p: &ConvexPolygon, t: &Vec2G, lattice: &Lattice) -> Vec<ConvexPolygon> {
    translate_mod_tracked(p, t, lattice)
        .into_iter()
        .map(|(c, _)| c)
        .collect()
}

/// Labeled union of convex pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub label: String,
    pub pieces: Vec<ConvexPolygon>,
}

impl Atom {
    pub fn new(label: impl Into<String>, pieces: Vec<ConvexPolygon>) -> Self {
        Atom {
            label: label.into(),
            pieces,
        }
    }

    pub fn area(&self) -> GoldenNumber {
        self.pieces.iter().fold(G::zero(), |s, p| s + p.area())
    }
}

/// Polygonal topological partition of a torus fundamental rectangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub lattice: Lattice,
    pub atoms: Vec<Atom>,
}

impl Partition {
    /// Builds a partition after checking the area and containment
    /// invariants; cross-atom overlaps are checked by [`Partition::validate`].
    pub fn new(lattice: Lattice, atoms: Vec<Atom>) -> Result<Self, GeomError> {
        let p = Partition { lattice, atoms };
        p.check_cover()?;
        Ok(p)
    }

    /// Skips validation; for internal constructions that preserve the
    /// invariants by design.
    pub(crate) fn new_unchecked(lattice: Lattice, atoms: Vec<Atom>) -> Self {
        Partition { lattice, atoms }
    }

    /// One atom covering the whole torus.
    pub fn trivial(lattice: Lattice, label: &str) -> Self {
        let d = lattice.domain();
        Partition::new_unchecked(lattice, vec![Atom::new(label, vec![d])])
    }

    fn check_cover(&self) -> Result<(), GeomError> {
        let dom = self.lattice.domain();
        for a in &self.atoms {
            for p in &a.pieces {
                if !p.vertices().iter().all(|v| dom.contains_closed(v)) {
                    return Err(GeomError::InvalidPartition(format!(
                        "piece {} of atom {} leaves the fundamental domain",
                        p, a.label
                    )));
                }
            }
        }
        let total = self.total_area();
        if total != self.lattice.covolume() {
            return Err(GeomError::InvalidPartition(format!(
                "total area {} differs from covolume {}",
                total,
                self.lattice.covolume()
            )));
        }
        Ok(())
    }

    /// Full invariant check including pairwise piece overlaps.
    pub fn validate(&self) -> Result<(), GeomError> {
        self.check_cover()?;
        let all: Vec<(usize, &ConvexPolygon)> = self
            .atoms
            .iter()
            .enumerate()
            .flat_map(|(i, a)| a.pieces.iter().map(move |p| (i, p)))
            .collect();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if clip(all[i].1, all[j].1).is_some() {
                    return Err(GeomError::InvalidPartition(format!(
                        "pieces of atoms {} and {} overlap",
                        self.atoms[all[i].0].label, self.atoms[all[j].0].label
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn total_area(&self) -> GoldenNumber {
        self.atoms.iter().fold(G::zero(), |s, a| s + a.area())
    }

    pub fn labels(&self) -> Vec<String> {
        self.atoms.iter().map(|a| a.label.clone()).collect()
    }

    pub fn atom(&self, label: &str) -> Option<&Atom> {
        self.atoms.iter().find(|a| a.label == label)
    }

    pub fn piece_count(&self) -> usize {
        self.atoms.iter().map(|a| a.pieces.len()).sum()
    }

    /// The partition pushed forward by x ↦ x + t on the torus.
    pub fn translate(&self, t: &Vec2G) -> Partition {
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                Atom::new(
                    a.label.clone(),
                    a.pieces
                        .iter()
                        .flat_map(|p| translate_mod(p, t, &self.lattice))
                        .collect(),
                )
            })
            .collect();
        Partition::new_unchecked(self.lattice.clone(), atoms)
    }

    /// Relabels atoms through `f`.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Partition {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom::new(f(&a.label), a.pieces.clone()))
            .collect();
        Partition::new_unchecked(self.lattice.clone(), atoms)
    }

    pub fn to_json(&self) -> Value {
        let atoms: Vec<Value> = self
            .atoms
            .iter()
            .map(|a| {
                let pieces: Vec<Value> = a
                    .pieces
                    .iter()
                    .map(|p| {
                        Value::Array(
                            p.vertices()
                                .iter()
                                .map(|v| json!([v.x.to_serial(), v.y.to_serial()]))
                                .collect(),
                        )
                    })
                    .collect();
                json!({"label": a.label, "pieces": pieces})
            })
            .collect();
        json!({"lattice": self.lattice.to_json(), "atoms": atoms})
    }

    pub fn from_json(v: &Value) -> Result<Self, GeomError> {
        let lat = v
            .get("lattice")
            .ok_or_else(|| GeomError::Format("missing lattice".into()))?;
        let lattice = Lattice::new(parse_vec(lat.get("g1"))?, parse_vec(lat.get("g2"))?)?;
        let atoms_v = v
            .get("atoms")
            .and_then(Value::as_array)
            .ok_or_else(|| GeomError::Format("missing atoms".into()))?;
        let mut atoms = Vec::new();
        for a in atoms_v {
            let label = match a.get("label") {
                Some(Value::String(s)) => s.clone(),
                Some(Value::Number(n)) => n.to_string(),
                _ => return Err(GeomError::Format("atom without label".into())),
            };
            let pieces_v = a
                .get("pieces")
                .and_then(Value::as_array)
                .ok_or_else(|| GeomError::Format(format!("atom {} without pieces", label)))?;
            let mut pieces = Vec::new();
            for pv in pieces_v {
                let verts = pv
                    .as_array()
                    .ok_or_else(|| GeomError::Format("piece is not a list".into()))?
                    .iter()
                    .map(|x| parse_vec(Some(x)))
                    .collect::<Result<Vec<_>, _>>()?;
                pieces.push(ConvexPolygon::new(verts)?);
            }
            atoms.push(Atom::new(label, pieces));
        }
        Partition::new(lattice, atoms)
    }

    pub fn from_json_str(s: &str) -> Result<Self, GeomError> {
        let v: Value = serde_json::from_str(s).map_err(|e| GeomError::Format(e.to_string()))?;
        Partition::from_json(&v)
    }
}

pub(crate) fn parse_vec(v: Option<&Value>) -> Result<Vec2G, GeomError> {
    let arr = v
        .and_then(Value::as_array)
        .ok_or_else(|| GeomError::Format("expected a coordinate pair".into()))?;
    if arr.len() != 2 {
        return Err(GeomError::Format("expected a coordinate pair".into()));
    }
    let c = |x: &Value| -> Result<GoldenNumber, GeomError> {
        match x {
            Value::String(s) => s
                .parse()
                .map_err(|e: crate::goldenfield::GoldenError| GeomError::Format(e.to_string())),
            Value::Number(n) => n
                .as_i64()
                .map(G::from_int)
                .ok_or_else(|| GeomError::Format(format!("non-integer number {}", n))),
            _ => Err(GeomError::Format("bad scalar".into())),
        }
    };
    Ok(Vec2G::new(c(&arr[0])?, c(&arr[1])?))
}

/// Common refinement A ∧ B with labels `a|b`.
pub fn refine(a: &Partition, b: &Partition) -> Result<Partition, GeomError> {
    refine_with(a, b, |x, y| format!("{}|{}", x, y))
}

/// Common refinement with a custom label combiner.
pub fn refine_with(
    a: &Partition,
    b: &Partition,
    label: impl Fn(&str, &str) -> String,
) -> Result<Partition, GeomError> {
    if a.lattice != b.lattice {
        return Err(GeomError::LatticeMismatch);
    }
    let mut atoms = Vec::new();
    for x in &a.atoms {
        for y in &b.atoms {
            let mut pieces = Vec::new();
            for p in &x.pieces {
                for q in &y.pieces {
                    if let Some(c) = clip(p, q) {
                        pieces.push(c);
                    }
                }
            }
            if !pieces.is_empty() {
                atoms.push(Atom::new(label(&x.label, &y.label), pieces));
            }
        }
    }
    Ok(Partition::new_unchecked(a.lattice.clone(), atoms))
}

/// Canonical direction: (1, s) when the x-component is nonzero, else (0, 1).
pub fn canonical_direction(d: &Vec2G) -> Option<Vec2G> {
    if d.is_zero() {
        None
    } else if d.x.is_zero() {
        Some(Vec2G::from_ints(0, 1))
    } else {
        Some(Vec2G::new(G::one(), &d.y / &d.x))
    }
}

/// Θ^P: canonical directions of all piece edges.
pub fn edge_directions(p: &Partition) -> Vec<Vec2G> {
    let mut set = BTreeSet::new();
    for a in &p.atoms {
        for piece in &a.pieces {
            for (s, e) in piece.edges() {
                if let Some(d) = canonical_direction(&(e - s)) {
                    set.insert(d);
                }
            }
        }
    }
    set.into_iter().collect()
}

/// True when v is parallel to some direction of Θ^P.
pub fn is_edge_direction(p: &Partition, v: &Vec2G) -> bool {
    match canonical_direction(v) {
        None => true,
        Some(c) => edge_directions(p).contains(&c),
    }
}

// normalized line n·x = c with the edge segments lying on it
type Line = (Vec2G, GoldenNumber, Vec<(Vec2G, Vec2G)>);

/// Point location with cached half-plane tests, for repeated queries
/// against one partition.
#[derive(Clone, Debug)]
pub struct Locator {
    lattice: Lattice,
    lines: Vec<Line>,
    // per piece: atom index and (line index, orientation)
    pieces: Vec<(usize, Vec<(usize, i32)>)>,
    labels: Vec<String>,
}

impl Locator {
    pub fn new(p: &Partition) -> Self {
        let mut lines: Vec<Line> = Vec::new();
        let mut index: BTreeMap<(Vec2G, GoldenNumber), usize> = BTreeMap::new();
        let mut pieces = Vec::new();
        for (ai, a) in p.atoms.iter().enumerate() {
            for piece in &a.pieces {
                let mut refs = Vec::new();
                for (s, e) in piece.edges() {
                    let d = e - s;
                    let n = Vec2G::new(-&d.y, d.x.clone());
                    // normalize the line (n, c) up to a signed scalar
                    let scale = if !n.x.is_zero() {
                        n.x.clone()
                    } else {
                        n.y.clone()
                    };
                    let orient = scale.signum();
                    let inv = scale.inverse().expect("nonzero normal");
                    let nn = n.scale(&inv);
                    let cc = nn.dot(s);
                    let key = (nn.clone(), cc.clone());
                    let li = *index.entry(key).or_insert_with(|| {
                        lines.push((nn, cc, Vec::new()));
                        lines.len() - 1
                    });
                    lines[li].2.push((s.clone(), e.clone()));
                    refs.push((li, orient));
                }
                pieces.push((ai, refs));
            }
        }
        Locator {
            lattice: p.lattice.clone(),
            lines,
            pieces,
            labels: p.labels(),
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Atom index of x + εv, x given in any coordinates.
    pub fn locate_index(&self, x: &Vec2G, v: &Vec2G) -> Result<usize, GeomError> {
        if v.is_zero() {
            return Err(GeomError::ZeroDirection);
        }
        let r = self.lattice.reduce_perturbed(x, v);
        let mut cache: Vec<i8> = vec![2; self.lines.len()];
        let mut eval = |li: usize| -> i8 {
            if cache[li] == 2 {
                let (n, c, _) = &self.lines[li];
                let mut s = (n.dot(&r) - c).signum();
                if s == 0 {
                    s = n.dot(v).signum();
                }
                cache[li] = s as i8;
            }
            cache[li]
        };
        for (ai, refs) in &self.pieces {
            let mut inside = true;
            let mut tangent = false;
            for &(li, orient) in refs {
                let s = eval(li);
                if s == 0 {
                    tangent = true;
                    continue;
                }
                if (s as i32) * orient < 0 {
                    inside = false;
                    break;
                }
            }
            if inside {
                if tangent {
                    return Err(GeomError::DirectionInBoundary {
                        x: r.to_string(),
                        v: v.to_string(),
                    });
                }
                return Ok(*ai);
            }
        }
        Err(GeomError::NotCovered(r.to_string()))
    }

    pub fn locate(&self, x: &Vec2G, v: &Vec2G) -> Result<&str, GeomError> {
        self.locate_index(x, v).map(|i| self.labels[i].as_str())
    }

    /// A piece edge whose closed segment contains the reduced point x.
    pub fn on_any_edge(&self, x: &Vec2G) -> Option<(Vec2G, Vec2G)> {
        let r = self.lattice.reduce(x);
        for (n, c, segs) in &self.lines {
            if n.dot(&r) != *c {
                continue;
            }
            if let Some((s, e)) = segs.iter().find(|(s, e)| between(s, e, &r)) {
                return Some((s.clone(), e.clone()));
            }
        }
        None
    }
}

fn between(a: &Vec2G, b: &Vec2G, x: &Vec2G) -> bool {
    let lo_x = a.x.clone().min(b.x.clone());
    let hi_x = a.x.clone().max(b.x.clone());
    let lo_y = a.y.clone().min(b.y.clone());
    let hi_y = a.y.clone().max(b.y.clone());
    x.x >= lo_x && x.x <= hi_x && x.y >= lo_y && x.y <= hi_y
}

/// Label of the atom containing x + εv for all small ε > 0.
pub fn locate(x: &Vec2G, p: &Partition, v: &Vec2G) -> Result<String, GeomError> {
    Locator::new(p).locate(x, v).map(str::to_string)
}
