mod data;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toruswang::datasets;
use toruswang::dynamics::{
    check_direction, code_patch, default_direction, fiber_signatures, frequencies, pattern_count,
    sector_directions, Patch, Shape, Window,
};
use toruswang::modelset::{
    classify_orbit, occurrences, sample_generic_point, scan_occurrences, Classification,
    CutProjectScheme,
};
use toruswang::sturmian::{to_string, CircleCoding};
use toruswang::svg;
use toruswang::torusgeom::{Partition, Vec2G};
use toruswang::wang::{find_periods, is_valid, TileSet};

use data::{parse_golden, parse_point, Source};

const SCREEN_HORIZON: usize = 50;

macro_rules! out {
    ($($t:tt)*) => { say(&format!("{}\n", format_args!($($t)*))) };
}

/// Writes to stdout; a closed pipe ends the process quietly.
fn say(s: &str) {
    if std::io::stdout().lock().write_all(s.as_bytes()).is_err() {
        std::process::exit(0);
    }
}

#[derive(Parser)]
#[command(
    name = "toruswang",
    version,
    about = "Wang tilings from codings of toroidal Z²-rotations"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Derive the tile set of the color partitions.
    Derive(DatasetArg),
    /// Code an orbit into a patch of tile indices.
    Generate {
        #[command(flatten)]
        run: RunArgs,
        /// Also write an SVG of the tiling.
        #[arg(long)]
        svg: Option<String>,
    },
    /// Check a patch against a tile set and look for periods.
    Verify {
        /// Patch file; the bundled 5×5 puzzle patch when omitted.
        #[arg(long)]
        patch: Option<String>,
        /// Tile file, one `right top left bottom` per line.
        #[arg(long)]
        tiles: Option<String>,
        #[arg(long, default_value = "jr")]
        dataset: String,
        #[arg(long, default_value_t = 10)]
        max_shift: usize,
    },
    /// Exact atom frequencies.
    Freq {
        #[command(flatten)]
        ds: DatasetArg,
        /// Only this atom label.
        #[arg(long)]
        tile: Option<String>,
    },
    /// Number of allowed w×h patterns.
    Complexity {
        #[command(flatten)]
        ds: DatasetArg,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
    },
    /// Occurrences of a pattern as a model set of the JR scheme.
    Occurrences {
        #[command(flatten)]
        run: RunArgs,
        /// Pattern file; the coded patch at the origin of this size when omitted.
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long, num_args = 2, value_names = ["W", "H"], default_values = ["2", "2"])]
        pattern_size: Vec<usize>,
        /// Also scan the coded patch and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Distinct patches coded with the sector directions.
    Fibers {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Generic or singular orbit up to a horizon.
    Classify {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = SCREEN_HORIZON)]
        horizon: usize,
    },
    /// Necklace coloring and factor complexity of a circle rotation.
    Sturmian {
        #[arg(long, default_value = "phi")]
        alpha: String,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values = ["-2", "8"], allow_negative_numbers = true)]
        range: Vec<i64>,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
    /// SVG of a partition or of a tiling patch.
    Render {
        #[command(flatten)]
        ds: DatasetArg,
        /// coding, y or z.
        #[arg(long, default_value = "coding")]
        partition: String,
        /// Render this tiling patch instead of a partition.
        #[arg(long)]
        patch: Option<String>,
        #[arg(long, default_value_t = 120.0)]
        scale: f64,
        #[arg(long, short)]
        output: Option<String>,
    },
}

#[derive(Args)]
struct DatasetArg {
    /// jr, u, ex3, ex4 or a JSON file.
    #[arg(long, default_value = "jr")]
    dataset: String,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    ds: DatasetArg,
    /// Starting point, two golden numbers (`a/b c/d` or a rational).
    #[arg(long, num_args = 2, value_names = ["X1", "X2"], allow_negative_numbers = true)]
    x: Option<Vec<String>>,
    /// Perturbation direction.
    #[arg(long, num_args = 2, value_names = ["V1", "V2"], allow_negative_numbers = true)]
    v: Option<Vec<String>>,
    #[arg(long, num_args = 2, value_names = ["OX", "OY"], default_values = ["0", "0"], allow_negative_numbers = true)]
    origin: Vec<i64>,
    #[arg(long, num_args = 2, value_names = ["W", "H"], default_values = ["10", "10"])]
    size: Vec<usize>,
    /// Sample a screened generic point with this seed when --x is absent.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short)]
    output: Option<String>,
}

/// Failure kinds mapped to exit codes.
enum Failure {
    Input(anyhow::Error),
    Verification(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

struct Run {
    src: Source,
    coding: Partition,
    x: Vec2G,
    v: Vec2G,
    window: Window,
    output: Option<String>,
}

impl RunArgs {
    fn resolve(&self) -> Result<Run> {
        let src = Source::load(&self.ds.dataset)?;
        let coding = src.coding()?;
        let v = match &self.v {
            Some(v) => parse_point(v)?,
            None => default_direction(),
        };
        check_direction(&coding, &v)?;
        let x = match (&self.x, self.seed) {
            (Some(x), _) => parse_point(x)?,
            (None, Some(seed)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let x = sample_generic_point(&src.rotation, &coding, SCREEN_HORIZON, &mut rng);
                eprintln!("seed {seed}: x = {} ; {}", x.x.to_serial(), x.y.to_serial());
                x
            }
            (None, None) => bail!("give a point with --x or a random seed with --seed"),
        };
        let window = Window::new((self.origin[0], self.origin[1]), self.size[0], self.size[1]);
        if window.width == 0 || window.height == 0 {
            bail!("window size must be positive");
        }
        Ok(Run {
            src,
            coding,
            x,
            v,
            window,
            output: self.output.clone(),
        })
    }
}

fn emit(output: &Option<String>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {path}")),
        None => {
            say(text);
            Ok(())
        }
    }
}

fn read_tiles(path: &str) -> Result<TileSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    Ok(TileSet::from_text(&text)?)
}

fn index_patch(p: &Patch<String>) -> Result<Patch<usize>> {
    let cells = p
        .entries()
        .map(|(_, l)| {
            l.parse::<usize>()
                .map_err(|_| anyhow!("label {l:?} is not a tile index"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Patch::new(p.origin, p.width, p.height, cells))
}

fn cmd_derive(ds: &DatasetArg) -> Result<()> {
    let src = Source::load(&ds.dataset)?;
    if src.colors.is_none() {
        bail!(
            "dataset {} has no color partitions to derive from",
            src.name
        );
    }
    let ts = src.coding_tiles()?;
    say(&ts.to_text());
    out!("# {} tiles", ts.len());
    Ok(())
}

fn cmd_generate(run: &RunArgs, svg_path: &Option<String>) -> Result<()> {
    let r = run.resolve()?;
    let patch = code_patch(&r.src.rotation, &r.coding, &r.x, &r.v, r.window)?;
    emit(&r.output, &patch.to_text())?;
    if let Some(path) = svg_path {
        let tiles = r.src.coding_tiles()?;
        let s = svg::render_tiling(&index_patch(&patch)?, &tiles, 60.0);
        fs::write(path, s).with_context(|| format!("writing {path}"))?;
    }
    Ok(())
}

fn cmd_verify(
    patch: &Option<String>,
    tiles: &Option<String>,
    dataset: &str,
    max_shift: usize,
) -> Result<(), Failure> {
    let p: Patch<usize> = match patch {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            Patch::from_text(&text).map_err(anyhow::Error::from)?
        }
        None => datasets::puzzle_patch(),
    };
    let t = match tiles {
        Some(path) => read_tiles(path)?,
        None => Source::load(dataset)?.coding_tiles()?,
    };
    let v = is_valid(&p, &t).map_err(anyhow::Error::from)?;
    for viol in &v.violations {
        out!(
            "violation {:?} at ({}, {})",
            viol.kind,
            viol.position.0,
            viol.position.1
        );
    }
    let periods = find_periods(&p, max_shift);
    out!(
        "{}×{} patch: {}, {} violations",
        p.width,
        p.height,
        if v.valid { "valid" } else { "invalid" },
        v.violations.len()
    );
    if periods.is_empty() {
        out!("no periods with max-norm ≤ {max_shift}");
    } else {
        let list: Vec<String> = periods.iter().map(|(a, b)| format!("({a},{b})")).collect();
        out!("periods: {}", list.join(" "));
    }
    if v.valid {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{} adjacency violations",
            v.violations.len()
        )))
    }
}

fn cmd_freq(ds: &DatasetArg, tile: &Option<String>) -> Result<()> {
    let src = Source::load(&ds.dataset)?;
    let p = src.coding()?;
    let f = frequencies(&p);
    let rows: Vec<_> = match tile {
        Some(t) => {
            let row = f
                .into_iter()
                .find(|(l, _)| l == t)
                .ok_or_else(|| anyhow!("no atom labeled {t:?}"))?;
            vec![row]
        }
        None => f,
    };
    for (label, v) in rows {
        out!("{label}\t{v}\t{:.6}", v.to_f64());
    }
    Ok(())
}

fn cmd_complexity(ds: &DatasetArg, max_size: usize) -> Result<()> {
    let src = Source::load(&ds.dataset)?;
    let p = src.coding()?;
    for h in 1..=max_size {
        for w in 1..=max_size {
            let n = pattern_count(&src.rotation, &p, &Shape::rect(w, h));
            out!("{w}x{h}\t{n}");
        }
    }
    Ok(())
}

fn cmd_occurrences(
    run: &RunArgs,
    pattern: &Option<String>,
    size: &[usize],
    oracle: bool,
) -> Result<(), Failure> {
    let r = run.resolve()?;
    if r.src.name != "jr" {
        return Err(
            anyhow!("occurrences needs the JR cut-and-project scheme (--dataset jr)").into(),
        );
    }
    let c = CutProjectScheme::jeandel_rao(r.x.clone());
    let pat: Patch<String> = match pattern {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {path}"))
                .map_err(Failure::Input)?;
            Patch::from_text(&text).map_err(anyhow::Error::from)?
        }
        None => {
            if size[0] == 0 || size[1] == 0 {
                return Err(anyhow!("pattern size must be positive").into());
            }
            code_patch(
                &c.rotation,
                &r.coding,
                &c.seed,
                &r.v,
                Window::new((0, 0), size[0], size[1]),
            )
            .map_err(anyhow::Error::from)?
        }
    };
    let occ = occurrences(&c, &r.coding, &pat, &r.v, r.window).map_err(anyhow::Error::from)?;
    let mut out = String::new();
    for (a, b) in &occ {
        out.push_str(&format!("{a} {b}\n"));
    }
    emit(&r.output, &out)?;
    eprintln!("{} occurrences", occ.len());
    if oracle {
        let scan =
            scan_occurrences(&c, &r.coding, &pat, &r.v, r.window).map_err(anyhow::Error::from)?;
        if scan == occ {
            eprintln!("oracle: scan agrees");
        } else {
            return Err(Failure::Verification(format!(
                "scan found {} occurrences, model set {}",
                scan.len(),
                occ.len()
            )));
        }
    }
    Ok(())
}

fn cmd_fibers(run: &RunArgs, radius: usize) -> Result<()> {
    let r = run.resolve()?;
    let dirs = sector_directions(&r.coding);
    let sigs = fiber_signatures(&r.src.rotation, &r.coding, &r.x, radius, &dirs)?;
    out!("{} sector directions", dirs.len());
    for d in &dirs {
        out!("  {d}");
    }
    out!("{} distinct patches of radius {radius}", sigs.len());
    Ok(())
}

fn cmd_classify(run: &RunArgs, horizon: usize) -> Result<()> {
    let r = run.resolve()?;
    match classify_orbit(&r.src.rotation, &r.coding, &r.x, horizon) {
        Classification::Generic { horizon } => out!("generic up to {horizon}"),
        Classification::Singular { n, edge } => {
            out!(
                "singular at n = ({}, {}) on edge {} – {}",
                n.0,
                n.1,
                edge.0,
                edge.1
            )
        }
    }
    Ok(())
}

fn cmd_sturmian(alpha: &str, range: &[i64], max_n: usize) -> Result<()> {
    let c = CircleCoding::new(parse_golden(alpha)?).map_err(|e| anyhow!("{e}"))?;
    let beads = c
        .code_necklace(range[0], range[1])
        .map_err(|e| anyhow!("{e}"))?;
    out!("{}", to_string(&beads));
    for n in 0..=max_n {
        let k = c.complexity(n).map_err(|e| anyhow!("{e}"))?;
        out!("{n}\t{k}");
    }
    Ok(())
}

fn cmd_render(
    ds: &DatasetArg,
    partition: &str,
    patch: &Option<String>,
    scale: f64,
    output: &Option<String>,
) -> Result<()> {
    let src = Source::load(&ds.dataset)?;
    let s = match patch {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let p: Patch<usize> = Patch::from_text(&text)?;
            svg::render_tiling(&p, &src.coding_tiles()?, scale)
        }
        None => {
            let p = match partition {
                "coding" => src.coding()?,
                "y" | "z" => {
                    let (y, z) = src
                        .colors
                        .clone()
                        .ok_or_else(|| anyhow!("dataset {} has no color partitions", src.name))?;
                    if partition == "y" {
                        y
                    } else {
                        z
                    }
                }
                other => bail!("unknown partition {other:?} (expected coding, y or z)"),
            };
            svg::render_partition(&p, scale)
        }
    };
    emit(output, &s)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Derive(ds) => cmd_derive(ds)?,
        Cmd::Generate { run, svg } => cmd_generate(run, svg)?,
        Cmd::Verify {
            patch,
            tiles,
            dataset,
            max_shift,
        } => cmd_verify(patch, tiles, dataset, *max_shift)?,
        Cmd::Freq { ds, tile } => cmd_freq(ds, tile)?,
        Cmd::Complexity { ds, max_size } => cmd_complexity(ds, *max_size)?,
        Cmd::Occurrences {
            run,
            pattern,
            pattern_size,
            oracle,
        } => cmd_occurrences(run, pattern, pattern_size, *oracle)?,
        Cmd::Fibers { run, radius } => cmd_fibers(run, *radius)?,
        Cmd::Classify { run, horizon } => cmd_classify(run, *horizon)?,
        Cmd::Sturmian {
            alpha,
            range,
            max_n,
        } => cmd_sturmian(alpha, range, *max_n)?,
        Cmd::Render {
            ds,
            partition,
            patch,
            scale,
            output,
        } => cmd_render(ds, partition, patch, *scale, output)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(2)
        }
    }
}
