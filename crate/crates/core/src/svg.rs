//! SVG 1.1 output for partitions and tiling patches.

use std::fmt::Write;

use crate::dynamics::Patch;
use crate::torusgeom::Partition;
use crate::wang::TileSet;

const PALETTE: [&str; 12] = [
    "#7fc97f", "#beaed4", "#fdc086", "#ffff99", "#386cb0", "#f0027f", "#bf5b17", "#a6cee3",
    "#b2df8a", "#fb9a99", "#cab2d6", "#e5e5e5",
];

fn header(w: f64, h: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.1}\" height=\"{h:.1}\" viewBox=\"0 0 {w:.1} {h:.1}\">\n"
    )
}

/// Atoms filled and outlined with dashed strokes, labels at the centroid
/// of each piece; y grows upward as in the usual figures.
pub fn render_partition(p: &Partition, scale: f64) -> String {
    let (w, h) = (p.lattice.g1.x.to_f64(), p.lattice.g2.y.to_f64());
    let m = 20.0;
    let (sw, sh) = (w * scale + 2.0 * m, h * scale + 2.0 * m);
    let tx = |x: f64| m + x * scale;
    let ty = |y: f64| m + (h - y) * scale;
    let mut s = header(sw, sh);
    for (i, a) in p.atoms.iter().enumerate() {
        let fill = PALETTE[i % PALETTE.len()];
        for piece in &a.pieces {
            let pts: Vec<String> = piece
                .vertices()
                .iter()
                .map(|v| {
                    let (x, y) = v.to_f64();
                    format!("{:.3},{:.3}", tx(x), ty(y))
                })
                .collect();
            let _ = writeln!(
                s,
                "<polygon points=\"{}\" fill=\"{}\" stroke=\"black\" stroke-width=\"1\" stroke-dasharray=\"4,3\"/>",
                pts.join(" "),
                fill
            );
        }
    }
    for a in &p.atoms {
        for piece in &a.pieces {
            let (cx, cy) = piece.centroid().to_f64();
            let _ = writeln!(
                s,
                "<text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"{:.1}\" text-anchor=\"middle\" dominant-baseline=\"middle\">{}</text>",
                tx(cx),
                ty(cy),
                scale * 0.12,
                escape(&a.label)
            );
        }
    }
    let _ = writeln!(
        s,
        "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"none\" stroke=\"black\" stroke-width=\"3\"/>",
        tx(0.0),
        ty(h),
        w * scale,
        h * scale
    );
    s.push_str("</svg>\n");
    s
}

/// Number of bumps encoding a color: digits as is, letters by alphabet rank.
fn bumps(color: &str) -> usize {
    if let Ok(n) = color.parse::<usize>() {
        return n;
    }
    match color.chars().next() {
        Some(c) if c.is_ascii_alphabetic() => (c.to_ascii_uppercase() as u8 - b'A') as usize + 1,
        _ => 0,
    }
}

/// Vertical edge from (x, y) upward with k semicircular bumps.
fn vertical_edge(x: f64, y: f64, k: usize, u: f64) -> String {
    if k == 0 {
        return format!("M {:.3} {:.3} v {:.3}", x, y, -u);
    }
    let r = (u * 0.6 / k as f64 / 2.0).min(u * 0.15);
    let gap = (u - 2.0 * r * k as f64) / (k as f64 + 1.0);
    let mut d = format!("M {:.3} {:.3}", x, y);
    for _ in 0..k {
        let _ = write!(d, " v {:.3} a {r:.3} {r:.3} 0 0 0 0 {:.3}", -gap, -2.0 * r);
    }
    let _ = write!(d, " v {:.3}", -gap);
    d
}

/// Horizontal edge from (x, y) rightward with k triangular bumps.
fn horizontal_edge(x: f64, y: f64, k: usize, u: f64) -> String {
    if k == 0 {
        return format!("M {:.3} {:.3} h {:.3}", x, y, u);
    }
    let b = u * 0.1;
    let side = (u - 2.0 * b * k as f64) / 2.0;
    let mut d = format!("M {:.3} {:.3} h {:.3}", x, y, side);
    for _ in 0..k {
        let _ = write!(d, " l {:.3} {:.3} l {:.3} {:.3}", b, -u * 0.15, b, u * 0.15);
    }
    let _ = write!(d, " h {:.3}", side);
    d
}

/// Tiling patch drawn with the geometric tile shapes: bumps on vertical
/// edges are semicircles, on horizontal edges triangles, one per unit of
/// the color.
pub fn render_tiling(patch: &Patch<usize>, tiles: &TileSet, unit: f64) -> String {
    let m = 20.0;
    let (w, h) = (patch.width as f64, patch.height as f64);
    let mut s = header(w * unit + 2.0 * m, h * unit + 2.0 * m);
    let px = |i: usize| m + i as f64 * unit;
    let py = |j: usize| m + (h - j as f64) * unit;
    let _ = writeln!(s, "<g fill=\"none\" stroke=\"#1f4fbf\" stroke-width=\"2\">");
    for j in 0..patch.height {
        for i in 0..patch.width {
            let t = &tiles.tiles[*patch.at(i, j)];
            let _ = writeln!(
                s,
                "<path d=\"{}\"/>",
                vertical_edge(px(i), py(j), bumps(&t.left), unit)
            );
            let _ = writeln!(
                s,
                "<path d=\"{}\"/>",
                horizontal_edge(px(i), py(j), bumps(&t.bottom), unit)
            );
            if i + 1 == patch.width {
                let _ = writeln!(
                    s,
                    "<path d=\"{}\"/>",
                    vertical_edge(px(i + 1), py(j), bumps(&t.right), unit)
                );
            }
            if j + 1 == patch.height {
                let _ = writeln!(
                    s,
                    "<path d=\"{}\"/>",
                    horizontal_edge(px(i), py(j + 1), bumps(&t.top), unit)
                );
            }
        }
    }
    s.push_str("</g>\n");
    for j in 0..patch.height {
        for i in 0..patch.width {
            let _ = writeln!(
                s,
                "<text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"{:.1}\" text-anchor=\"middle\" dominant-baseline=\"middle\">{}</text>",
                px(i) + unit / 2.0,
                py(j) - unit / 2.0,
                unit * 0.3,
                patch.at(i, j)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
