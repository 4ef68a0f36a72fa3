use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::Value;
use toruswang::datasets::{self, Dataset};
use toruswang::dynamics::Z2Rotation;
use toruswang::goldenfield::GoldenNumber as G;
use toruswang::torusgeom::{Partition, Vec2G};
use toruswang::wang::{derive_tileset, TileSet};

/// A builtin example or a JSON file describing a rotation with either its
/// coding partition (`lattice`, `atoms`) or its color partitions (`y`, `z`).
pub struct Source {
    pub name: String,
    pub rotation: Z2Rotation,
    pub tiles: Option<TileSet>,
    pub colors: Option<(Partition, Partition)>,
    coding: Option<Partition>,
}

impl Source {
    pub fn load(sel: &str) -> Result<Self> {
        match Dataset::parse(sel) {
            Some(d) => Ok(Self::builtin(sel, d)),
            None if Path::new(sel).exists() => Self::from_file(sel),
            None => bail!("unknown dataset {sel:?} (expected jr, u, ex3, ex4 or a file path)"),
        }
    }

    fn builtin(name: &str, d: Dataset) -> Self {
        let coding = match d {
            Dataset::Jr => Some(datasets::jr_coding_partition().clone()),
            _ => None,
        };
        Source {
            name: name.to_string(),
            rotation: d.rotation(),
            tiles: Some(d.tiles()),
            colors: d.color_partitions(),
            coding,
        }
    }

    fn from_file(path: &str) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
        let rot = v
            .get("rotation")
            .ok_or_else(|| anyhow!("{path}: missing rotation"))?;
        let alpha = parse_vec(rot.get("alpha")).context("rotation.alpha")?;
        let beta = parse_vec(rot.get("beta")).context("rotation.beta")?;
        let (coding, colors) = if v.get("atoms").is_some() {
            (Some(Partition::from_json(&v)?), None)
        } else {
            let y = Partition::from_json(
                v.get("y")
                    .ok_or_else(|| anyhow!("{path}: needs atoms or y and z"))?,
            )?;
            let z = Partition::from_json(v.get("z").ok_or_else(|| anyhow!("{path}: missing z"))?)?;
            (None, Some((y, z)))
        };
        let lattice = match (&coding, &colors) {
            (Some(p), _) => p.lattice.clone(),
            (_, Some((y, _))) => y.lattice.clone(),
            _ => unreachable!(),
        };
        Ok(Source {
            name: path.to_string(),
            rotation: Z2Rotation::new(lattice, alpha, beta),
            tiles: None,
            colors,
            coding,
        })
    }

    /// The partition used to code orbits: given directly or derived from
    /// the color partitions.
    pub fn coding(&self) -> Result<Partition> {
        if let Some(p) = &self.coding {
            return Ok(p.clone());
        }
        let (y, z) = self.colors.as_ref().ok_or_else(|| {
            anyhow!(
                "dataset {} has no partition geometry; only its tile set is available",
                self.name
            )
        })?;
        let (_, p) = derive_tileset(&self.rotation, y, z)?;
        Ok(p)
    }

    /// Tile set matching the labels of [`Source::coding`].
    pub fn coding_tiles(&self) -> Result<TileSet> {
        if self.coding.is_some() {
            return self
                .tiles
                .clone()
                .ok_or_else(|| anyhow!("dataset {} has no tile set", self.name));
        }
        let (y, z) = self
            .colors
            .as_ref()
            .ok_or_else(|| anyhow!("dataset {} has no partition geometry", self.name))?;
        Ok(derive_tileset(&self.rotation, y, z)?.0)
    }
}

fn parse_vec(v: Option<&Value>) -> Result<Vec2G> {
    let arr = v
        .and_then(Value::as_array)
        .filter(|a| a.len() == 2)
        .ok_or_else(|| anyhow!("expected a pair of numbers"))?;
    let c = |x: &Value| -> Result<G> {
        let s = x.as_str().ok_or_else(|| anyhow!("expected a string"))?;
        parse_golden(s)
    };
    Ok(Vec2G::new(c(&arr[0])?, c(&arr[1])?))
}

/// Golden serialization, plain rational, or `phi`.
pub fn parse_golden(s: &str) -> Result<G> {
    match s.trim() {
        "phi" | "φ" => Ok(G::phi()),
        t => t.parse::<G>().map_err(|e| anyhow!("{e}")),
    }
}

pub fn parse_point(v: &[String]) -> Result<Vec2G> {
    match v {
        [x, y] => Ok(Vec2G::new(parse_golden(x)?, parse_golden(y)?)),
        _ => bail!("a point needs two coordinates"),
    }
}
