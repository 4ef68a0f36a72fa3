//! Wang tiles, validity, tile-set derivation from partition pairs, and
//! window-relative period detection.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::dynamics::{Patch, Z2Rotation};
use crate::torusgeom::{clip, Atom, ConvexPolygon, GeomError, Partition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WangError {
    #[error("duplicate tile {0}")]
    DuplicateTile(String),
    #[error("tile index {index} at ({x}, {y}) is out of range for {count} tiles")]
    LabelOutOfRange {
        index: usize,
        x: i64,
        y: i64,
        count: usize,
    },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("tile set format: {0}")]
    Format(String),
}

/// Unit square with edge colors (right, top, left, bottom).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WangTile {
    pub right: String,
    pub top: String,
    pub left: String,
    pub bottom: String,
}

impl WangTile {
    pub fn new(right: &str, top: &str, left: &str, bottom: &str) -> Self {
        WangTile {
            right: right.into(),
            top: top.into(),
            left: left.into(),
            bottom: bottom.into(),
        }
    }

    /// From four single-character colors, e.g. "FOJO".
    pub fn from_letters(s: &str) -> Self {
        let c: Vec<String> = s.chars().map(|c| c.to_string()).collect();
        assert_eq!(c.len(), 4, "four colors expected");
        WangTile::new(&c[0], &c[1], &c[2], &c[3])
    }

    pub fn from_ints(r: u32, t: u32, l: u32, b: u32) -> Self {
        WangTile::new(
            &r.to_string(),
            &t.to_string(),
            &l.to_string(),
            &b.to_string(),
        )
    }
}

impl fmt::Display for WangTile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.right, self.top, self.left, self.bottom
        )
    }
}

/// Ordered tile inventory; tiles are referred to by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileSet {
    pub tiles: Vec<WangTile>,
    pub names: Vec<String>,
}

impl TileSet {
    /// Rejects duplicate quadruples.
    pub fn new(tiles: Vec<WangTile>) -> Result<Self, WangError> {
        let mut seen = std::collections::BTreeSet::new();
        for t in &tiles {
            if !seen.insert(t.clone()) {
                return Err(WangError::DuplicateTile(t.to_string()));
            }
        }
        let names = (0..tiles.len()).map(|i| i.to_string()).collect();
        Ok(TileSet { tiles, names })
    }

    /// Keeps duplicates as listed.
    pub(crate) fn new_allow_duplicates(tiles: Vec<WangTile>) -> Self {
        let names = (0..tiles.len()).map(|i| i.to_string()).collect();
        TileSet { tiles, names }
    }

    pub fn with_names(mut self, prefix: &str) -> Self {
        self.names = (0..self.tiles.len())
            .map(|i| format!("{}{}", prefix, i))
            .collect();
        self
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn index_of(&self, t: &WangTile) -> Option<usize> {
        self.tiles.iter().position(|x| x == t)
    }

    /// One tile per line: `right top left bottom`.
    pub fn to_text(&self) -> String {
        self.tiles.iter().map(|t| format!("{}\n", t)).collect()
    }

    pub fn from_text(s: &str) -> Result<Self, WangError> {
        let mut tiles = Vec::new();
        for line in s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let c: Vec<&str> = line.split_whitespace().collect();
            if c.len() != 4 {
                return Err(WangError::Format(format!(
                    "expected 4 colors in {:?}",
                    line
                )));
            }
            tiles.push(WangTile::new(c[0], c[1], c[2], c[3]));
        }
        TileSet::new(tiles)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Adjacency {
    /// right(x_n) ≠ left(x_{n+e1})
    Horizontal,
    /// top(x_n) ≠ bottom(x_{n+e2})
    Vertical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub position: (i64, i64),
    pub kind: Adjacency,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validity {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Checks every internal adjacency of a tiling patch.
pub fn is_valid(patch: &Patch<usize>, t: &TileSet) -> Result<Validity, WangError> {
    for (n, &i) in patch.entries() {
        if i >= t.len() {
            return Err(WangError::LabelOutOfRange {
                index: i,
                x: n.0,
                y: n.1,
                count: t.len(),
            });
        }
    }
    let mut violations = Vec::new();
    for (n, &i) in patch.entries() {
        let a = &t.tiles[i];
        if let Some(&j) = patch.get((n.0 + 1, n.1)) {
            if a.right != t.tiles[j].left {
                violations.push(Violation {
                    position: n,
                    kind: Adjacency::Horizontal,
                });
            }
        }
        if let Some(&j) = patch.get((n.0, n.1 + 1)) {
            if a.top != t.tiles[j].bottom {
                violations.push(Violation {
                    position: n,
                    kind: Adjacency::Vertical,
                });
            }
        }
    }
    Ok(Validity {
        valid: violations.is_empty(),
        violations,
    })
}

/// Tiles from nonempty P_(i,j,k,l) = Y_i ∩ Z_j ∩ R^{e1}(Y_k) ∩ R^{e2}(Z_l),
/// sorted, together with the coding partition labeled by tile index.
pub fn derive_tileset(
    r: &Z2Rotation,
    y: &Partition,
    z: &Partition,
) -> Result<(TileSet, Partition), WangError> {
    if y.lattice != z.lattice || y.lattice != r.lattice {
        return Err(GeomError::LatticeMismatch.into());
    }
    let y1 = y.translate(&r.alpha);
    let z2 = z.translate(&r.beta);
    let mut found: BTreeMap<WangTile, Vec<ConvexPolygon>> = BTreeMap::new();
    for yi in &y.atoms {
        for zj in &z.atoms {
            let a = meet(&yi.pieces, &zj.pieces);
            if a.is_empty() {
                continue;
            }
            for yk in &y1.atoms {
                let b = meet(&a, &yk.pieces);
                if b.is_empty() {
                    continue;
                }
                for zl in &z2.atoms {
                    let c = meet(&b, &zl.pieces);
                    if !c.is_empty() {
                        let t = WangTile::new(&yi.label, &zj.label, &yk.label, &zl.label);
                        found.entry(t).or_default().extend(c);
                    }
                }
            }
        }
    }
    let mut tiles = Vec::new();
    let mut atoms = Vec::new();
    for (i, (t, pieces)) in found.into_iter().enumerate() {
        tiles.push(t);
        atoms.push(Atom::new(i.to_string(), pieces));
    }
    let ts = TileSet::new(tiles)?;
    let part = Partition::new(y.lattice.clone(), atoms)?;
    Ok((ts, part))
}

fn meet(a: &[ConvexPolygon], b: &[ConvexPolygon]) -> Vec<ConvexPolygon> {
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

/// Reorders a derived tile set (and relabels its partition) to follow the
/// order of `reference`. Fails if the two sets differ.
pub fn reindex_to(
    derived: &TileSet,
    partition: &Partition,
    reference: &TileSet,
) -> Option<Partition> {
    if derived.len() != reference.len() {
        return None;
    }
    let mut map = BTreeMap::new();
    for (i, t) in derived.tiles.iter().enumerate() {
        map.insert(i.to_string(), reference.index_of(t)?.to_string());
    }
    let mut atoms: Vec<Atom> = partition
        .atoms
        .iter()
        .map(|a| Atom::new(map[&a.label].clone(), a.pieces.clone()))
        .collect();
    atoms.sort_by_key(|a| a.label.parse::<usize>().unwrap_or(usize::MAX));
    Some(Partition::new_unchecked(partition.lattice.clone(), atoms))
}

/// Nonzero shifts n with max(|n1|, |n2|) ≤ max_shift under which the patch
/// agrees with itself on a nonempty overlap.
pub fn find_periods<L: PartialEq + Clone>(patch: &Patch<L>, max_shift: usize) -> Vec<(i64, i64)> {
    let m = max_shift as i64;
    let (w, h) = (patch.width as i64, patch.height as i64);
    let mut out = Vec::new();
    for dy in -m..=m {
        for dx in -m..=m {
            if (dx, dy) == (0, 0) || dx.abs() >= w || dy.abs() >= h {
                continue;
            }
            let ok = (0..h).all(|j| {
                (0..w).all(|i| {
                    let (i2, j2) = (i + dx, j + dy);
                    if i2 < 0 || j2 < 0 || i2 >= w || j2 >= h {
                        return true;
                    }
                    patch.at(i as usize, j as usize) == patch.at(i2 as usize, j2 as usize)
                })
            });
            if ok {
                out.push((dx, dy));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domino_violations() {
        let t = TileSet::new(vec![WangTile::from_ints(2, 4, 2, 1)]).unwrap();
        let p = Patch::new((0, 0), 1, 2, vec![0, 0]);
        let v = is_valid(&p, &t).unwrap();
        assert!(!v.valid);
        assert_eq!(
            v.violations,
            vec![Violation {
                position: (0, 0),
                kind: Adjacency::Vertical
            }]
        );
        let q = Patch::new((0, 0), 2, 1, vec![0, 0]);
        assert!(is_valid(&q, &t).unwrap().valid);
        let bad = Patch::new((0, 0), 1, 1, vec![3]);
        assert!(matches!(
            is_valid(&bad, &t),
            Err(WangError::LabelOutOfRange { .. })
        ));
    }

    #[test]
    fn duplicates_rejected() {
        let t = WangTile::from_letters("ACAC");
        assert!(TileSet::new(vec![t.clone(), t]).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let ts = TileSet::new(vec![
            WangTile::from_letters("FOJO"),
            WangTile::from_letters("FOHL"),
        ])
        .unwrap();
        assert_eq!(ts.to_text(), "F O J O\nF O H L\n");
        assert_eq!(TileSet::from_text(&ts.to_text()).unwrap(), ts);
    }

    #[test]
    fn periods_of_small_patches() {
        let one = Patch::new((0, 0), 1, 1, vec![0usize]);
        assert!(find_periods(&one, 5).is_empty());
        let stripes = Patch::new((0, 0), 4, 2, vec![0usize, 1, 0, 1, 0, 1, 0, 1]);
        let p = find_periods(&stripes, 2);
        assert!(p.contains(&(2, 0)) && p.contains(&(0, 1)) && !p.contains(&(1, 0)));
    }
}
