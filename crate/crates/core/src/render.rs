//! Deterministic SVG drawings of representations.
//!
//! The drawing works directly in grid units (the `viewBox` is in units of
//! 10⁻⁴ radius) so every emitted number is an integer.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::construction::{track_layout, Representation, UNITS_PER_RADIUS};
use crate::quotient::AtomKey;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderOptions {
    /// Draw each crowd as one dashed circle labeled with its size.
    pub collapse_crowds: bool,
    /// Output pixels per disk radius.
    pub pixels_per_radius: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            collapse_crowds: false,
            pixels_per_radius: 20,
        }
    }
}

pub fn render_svg(r: &Representation, opts: &RenderOptions) -> String {
    let radius = UNITS_PER_RADIUS;
    let margin = 2 * radius;
    let layout = track_layout(&r.params);

    // bounding box over centers and bends, y pointing up
    let xs = r
        .disks
        .iter()
        .map(|d| d.center.x)
        .chain(layout.bends.iter().map(|p| p.x));
    let ys = r
        .disks
        .iter()
        .map(|d| d.center.y)
        .chain(layout.bends.iter().map(|p| p.y));
    let (x0, x1) = xs.fold((0, 0), |(lo, hi), x| (lo.min(x), hi.max(x)));
    let (y0, y1) = ys.fold((0, 0), |(lo, hi), y| (lo.min(y), hi.max(y)));
    let (left, right) = (x0 - margin, x1 + margin);
    let (bottom, top) = (y0 - margin, y1 + margin);
    let (w, h) = (right - left, top - bottom);
    let px = |units: i64| units * opts.pixels_per_radius as i64 / radius;

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"{left} {} {w} {h}\">",
        px(w).max(1),
        px(h).max(1),
        -top
    )
    .unwrap();
    writeln!(
        out,
        "<rect x=\"{left}\" y=\"{}\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>",
        -top
    )
    .unwrap();

    out.push_str("<g id=\"tracks\" stroke=\"#999999\" stroke-width=\"300\" fill=\"none\">\n");
    for (s, b) in layout.bends.iter().enumerate() {
        writeln!(
            out,
            "<polyline data-set=\"{s}\" points=\"{left},{} {},{} {},{}\"/>",
            -b.y, b.x, -b.y, b.x, -top
        )
        .unwrap();
    }
    out.push_str("</g>\n");

    out.push_str("<g id=\"disks\" fill=\"none\" stroke-width=\"200\">\n");
    if opts.collapse_crowds {
        let mut atoms: BTreeMap<AtomKey, (i128, i128, i64)> = BTreeMap::new();
        for d in &r.disks {
            let e = atoms.entry(AtomKey::from(&d.label)).or_default();
            e.0 += d.center.x as i128;
            e.1 += d.center.y as i128;
            e.2 += 1;
        }
        for (k, (sx, sy, count)) in atoms {
            let (cx, cy) = ((sx / count as i128) as i64, (sy / count as i128) as i64);
            let color = PALETTE[k.set.index() % PALETTE.len()];
            if count > 1 || k.part.is_crowd() {
                writeln!(
                    out,
                    "<circle cx=\"{cx}\" cy=\"{}\" r=\"{radius}\" stroke=\"{color}\" stroke-dasharray=\"1200 800\"/>",
                    -cy
                )
                .unwrap();
                writeln!(
                    out,
                    "<text x=\"{cx}\" y=\"{}\" font-size=\"6000\" text-anchor=\"middle\" fill=\"{color}\">{count}</text>",
                    -cy + 2000
                )
                .unwrap();
            } else {
                writeln!(
                    out,
                    "<circle cx=\"{cx}\" cy=\"{}\" r=\"{radius}\" stroke=\"{color}\"/>",
                    -cy
                )
                .unwrap();
            }
        }
    } else {
        for d in &r.disks {
            let color = PALETTE[d.label.set.index() % PALETTE.len()];
            writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{radius}\" stroke=\"{color}\"/>",
                d.center.x, -d.center.y
            )
            .unwrap();
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}
