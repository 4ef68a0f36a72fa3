//! Builtin data: the Jeandel-Rao partitions and rotation, the tile sets of
//! the small ex3/ex4 examples, and a solved 5×5 puzzle patch.

use std::sync::OnceLock;

use crate::dynamics::{Patch, Z2Rotation};
use crate::goldenfield::{g, G};
use crate::torusgeom::{Lattice, Partition, Vec2G};
use crate::wang::{derive_tileset, reindex_to, TileSet, WangTile};

pub const JR_Y_JSON: &str = include_str!("../data/jr_y.json");
pub const JR_Z_JSON: &str = include_str!("../data/jr_z.json");
/// Atoms 0…10 as drawn on the printed solver sheet.
pub const JR_P0_JSON: &str = include_str!("../data/jr_p0.json");

/// Γ₀ = ⟨(φ, 0), (1, φ+3)⟩.
pub fn gamma0() -> Lattice {
    Lattice::new(
        Vec2G::new(g(0, 1), G::zero()),
        Vec2G::new(G::one(), g(3, 1)),
    )
    .expect("normal form")
}

/// R₀ on R²/Γ₀ with α = e1, β = e2.
pub fn jr_rotation() -> Z2Rotation {
    Z2Rotation::new(gamma0(), Vec2G::from_ints(1, 0), Vec2G::from_ints(0, 1))
}

/// R_U on R²/Z² with α = (φ⁻², 0), β = (0, φ⁻²).
pub fn u_rotation() -> Z2Rotation {
    let s = g(2, -1);
    Z2Rotation::new(
        Lattice::square(),
        Vec2G::new(s.clone(), G::zero()),
        Vec2G::new(G::zero(), s),
    )
}

/// x ↦ x + φn on R²/Z² (stored reduced as φ − 1).
pub fn ex4_rotation() -> Z2Rotation {
    let s = g(-1, 1);
    Z2Rotation::new(
        Lattice::square(),
        Vec2G::new(s.clone(), G::zero()),
        Vec2G::new(G::zero(), s),
    )
}

/// Any rotation works for the trivial partitions; this one reuses the ex4
/// translation.
pub fn ex3_rotation() -> Z2Rotation {
    ex4_rotation()
}

pub fn jr_y() -> Partition {
    Partition::from_json_str(JR_Y_JSON).expect("builtin partition")
}

pub fn jr_z() -> Partition {
    Partition::from_json_str(JR_Z_JSON).expect("builtin partition")
}

pub fn jr_p0_sheet() -> Partition {
    Partition::from_json_str(JR_P0_JSON).expect("builtin partition")
}

pub fn ex3_y() -> Partition {
    Partition::trivial(Lattice::square(), "A")
}

pub fn ex3_z() -> Partition {
    Partition::trivial(Lattice::square(), "B")
}

/// 𝒯₀ in the order of its defining list.
pub fn jr_tiles() -> TileSet {
    let t = [
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
    ];
    TileSet::new(
        t.iter()
            .map(|&(a, b, c, d)| WangTile::from_ints(a, b, c, d))
            .collect(),
    )
    .expect("distinct tiles")
    .with_names("t")
}

/// 𝒰, 19 tiles with letter colors.
pub fn u_tiles() -> TileSet {
    let t = [
        "FOJO", "FOHL", "JMFP", "DMFK", "HPJP", "HPHN", "HKFP", "HKDP", "BOIO", "GLEO", "GLCL",
        "ALIO", "EPGP", "EPIP", "IPGK", "IPIK", "IKBM", "IKAK", "CNIP",
    ];
    TileSet::new(t.iter().map(|s| WangTile::from_letters(s)).collect())
        .expect("distinct tiles")
        .with_names("u")
}

pub fn ex3_tiles() -> TileSet {
    TileSet::new(vec![WangTile::from_letters("ABAB")]).expect("one tile")
}

/// The 20 ex4 tiles as drawn, six quadruples repeated, so this set is
/// built without the duplicate check.
pub fn ex4_tiles() -> TileSet {
    let t = [
        "ACAC", "ACAD", "ACAD", "ADAD", "ADAC", "ADAD", "BCAC", "BCAD", "BDAC", "BCAC", "ACBD",
        "ADBD", "ADBC", "ADBD", "ACBC", "BDBC", "BCBC", "BDBC", "BDBD", "BCBC",
    ];
    TileSet::new_allow_duplicates(t.iter().map(|s| WangTile::from_letters(s)).collect())
}

/// A solved 5×5 puzzle (tile indices of 𝒯₀), columns bottom to top.
pub fn puzzle_patch() -> Patch<usize> {
    let cols: Vec<Vec<usize>> = vec![
        vec![6, 1, 7, 2, 5],
        vec![6, 1, 3, 8, 7],
        vec![7, 0, 9, 7, 5],
        vec![4, 0, 9, 3, 7],
        vec![5, 0, 9, 10, 4],
    ];
    Patch::from_columns((0, 0), &cols)
}

/// Coding partition P₀ derived from (𝒴, 𝒵, R₀), atoms labeled by the
/// 𝒯₀ index ("0" … "10") in list order.
pub fn jr_coding_partition() -> &'static Partition {
    static CELL: OnceLock<Partition> = OnceLock::new();
    CELL.get_or_init(|| {
        let (ts, p) = derive_tileset(&jr_rotation(), &jr_y(), &jr_z()).expect("derivation");
        reindex_to(&ts, &p, &jr_tiles()).expect("derived set equals the tile list")
    })
}

/// Selector for the builtin examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dataset {
    Jr,
    U,
    Ex3,
    Ex4,
}

impl Dataset {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "jr" => Some(Dataset::Jr),
            "u" => Some(Dataset::U),
            "ex3" => Some(Dataset::Ex3),
            "ex4" => Some(Dataset::Ex4),
            _ => None,
        }
    }

    pub fn rotation(self) -> Z2Rotation {
        match self {
            Dataset::Jr => jr_rotation(),
            Dataset::U => u_rotation(),
            Dataset::Ex3 => ex3_rotation(),
            Dataset::Ex4 => ex4_rotation(),
        }
    }

    pub fn tiles(self) -> TileSet {
        match self {
            Dataset::Jr => jr_tiles(),
            Dataset::U => u_tiles(),
            Dataset::Ex3 => ex3_tiles(),
            Dataset::Ex4 => ex4_tiles(),
        }
    }

    /// Color partitions (𝒴, 𝒵) when their geometry is available.
    pub fn color_partitions(self) -> Option<(Partition, Partition)> {
        match self {
            Dataset::Jr => Some((jr_y(), jr_z())),
            Dataset::Ex3 => Some((ex3_y(), ex3_z())),
            Dataset::U | Dataset::Ex4 => None,
        }
    }
}
