//! Snapshot rendering: ASCII for terminals, SVG for figures.
//!
//! The triangular grid is drawn with each row offset by half a cell, rigid
//! bonds as solid strokes/filled dots and flexible bonds as hollow circles.

use crate::grid::GridPoint;
use crate::kinetics::config::{BondType, Configuration};
use crate::state::StateTable;
use std::collections::HashMap;

/// ASCII snapshot. Rows are printed top-down with a half-cell indent per
/// row so the six-neighbour structure reads correctly.
pub fn render_ascii(config: &Configuration, states: &StateTable) -> String {
    if config.is_empty() {
        return String::new();
    }
    let min_x = config.positions().map(|p| p.x).min().unwrap();
    let max_x = config.positions().map(|p| p.x).max().unwrap();
    let min_y = config.positions().map(|p| p.y).min().unwrap();
    let max_y = config.positions().map(|p| p.y).max().unwrap();

    let cell = 6usize; // label width + bond glyph
    let mut out = String::new();
    for y in (min_y..=max_y).rev() {
        // Half-cell indent per row (triangular offset).
        let indent = (y - min_y) as usize * (cell / 2);
        let mut row = " ".repeat(indent);
        for x in min_x..=max_x {
            let p = GridPoint::new(x, y);
            match config.state_at(p) {
                Some(s) => {
                    let mut label = states.name(s).to_string();
                    label.truncate(4);
                    row.push_str(&format!("{label:<4}"));
                    let right = GridPoint::new(x + 1, y);
                    match config.bond(p, right) {
                        BondType::Rigid => row.push_str("--"),
                        BondType::Flexible => row.push_str("oo"),
                        BondType::Null => row.push_str("  "),
                    }
                }
                None => row.push_str(&" ".repeat(cell)),
            }
        }
        out.push_str(row.trim_end());
        out.push('\n');
        if y > min_y {
            // Diagonal bond glyphs between row y and y-1: +y bonds go
            // straight down-left visually, -w bonds down-right.
            let mut diag = " ".repeat(indent.saturating_sub(cell / 2));
            for x in min_x..=max_x {
                let p = GridPoint::new(x, y);
                let below = GridPoint::new(x, y - 1); // p = below + y
                let below_right = GridPoint::new(x + 1, y - 1); // p = below_right + w
                let l = match config.bond(p, below) {
                    BondType::Rigid => '\\',
                    BondType::Flexible => 'o',
                    BondType::Null => ' ',
                };
                let r = match config.bond(p, below_right) {
                    BondType::Rigid => '/',
                    BondType::Flexible => 'o',
                    BondType::Null => ' ',
                };
                diag.push_str(&format!(" {l} {r}  "));
            }
            out.push_str(diag.trim_end());
            out.push('\n');
        }
    }
    out
}

/// Deterministic colour per state name.
fn color_of(name: &str) -> String {
    let mut h: u32 = 2166136261;
    for b in name.bytes() {
        h ^= b as u32;
        h = h.wrapping_mul(16777619);
    }
    let hue = h % 360;
    format!("hsl({hue},70%,55%)")
}

/// SVG snapshot with the paper's visual convention: monomers as labelled
/// discs, rigid bonds as solid red dots on the bond midpoint, flexible
/// bonds as hollow red circles.
pub fn render_svg(config: &Configuration, states: &StateTable) -> String {
    let scale = 40.0;
    let r = 14.0;
    // Axial to cartesian: x + y/2, with y flipped for screen coordinates.
    let pos = |p: GridPoint| -> (f64, f64) {
        (
            (p.x as f64 + p.y as f64 * 0.5) * scale,
            -(p.y as f64) * scale * 0.866,
        )
    };
    let mut min = (f64::MAX, f64::MAX);
    let mut max = (f64::MIN, f64::MIN);
    let mut colors: HashMap<&str, String> = HashMap::new();
    for (p, _) in config.monomers() {
        let (x, y) = pos(p);
        min.0 = min.0.min(x);
        min.1 = min.1.min(y);
        max.0 = max.0.max(x);
        max.1 = max.1.max(y);
    }
    if config.is_empty() {
        min = (0.0, 0.0);
        max = (0.0, 0.0);
    }
    let pad = scale;
    let (w, h) = (max.0 - min.0 + 2.0 * pad, max.1 - min.1 + 2.0 * pad);
    let tx = |x: f64| x - min.0 + pad;
    let ty = |y: f64| y - min.1 + pad;

    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">\n"
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (a, b, t) in config.bonds() {
        let (ax, ay) = pos(a);
        let (bx, by) = pos(b);
        out.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#444\" stroke-width=\"2\"/>\n",
            tx(ax), ty(ay), tx(bx), ty(by)
        ));
        let (mx, my) = (tx((ax + bx) / 2.0), ty((ay + by) / 2.0));
        match t {
            BondType::Rigid => out.push_str(&format!(
                "<circle cx=\"{mx:.1}\" cy=\"{my:.1}\" r=\"4\" fill=\"#d22\"/>\n"
            )),
            BondType::Flexible => out.push_str(&format!(
                "<circle cx=\"{mx:.1}\" cy=\"{my:.1}\" r=\"4\" fill=\"white\" stroke=\"#d22\" stroke-width=\"2\"/>\n"
            )),
            BondType::Null => {}
        }
    }
    for (p, s) in config.monomers() {
        let name = states.name(s);
        let fill = colors
            .entry(name)
            .or_insert_with(|| color_of(name))
            .clone();
        let (x, y) = pos(p);
        out.push_str(&format!(
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"{r}\" fill=\"{fill}\" stroke=\"#222\"/>\n",
            tx(x),
            ty(y)
        ));
        let mut label = name.to_string();
        label.truncate(6);
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"9\" text-anchor=\"middle\" dominant-baseline=\"middle\">{label}</text>\n",
            tx(x),
            ty(y)
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::StateTable;

    #[test]
    fn empty_config_renders_empty() {
        let t = StateTable::new();
        assert_eq!(render_ascii(&Configuration::new(), &t), "");
        let svg = render_svg(&Configuration::new(), &t);
        assert!(svg.starts_with("<svg"));
    }

    #[test]
    fn line_renders_cells_and_bonds() {
        let mut t = StateTable::new();
        let a = t.intern("a");
        let mut c = Configuration::new();
        for i in 0..3 {
            c.add_monomer(GridPoint::new(i, 0), a).unwrap();
        }
        c.set_bond(GridPoint::new(0, 0), GridPoint::new(1, 0), BondType::Rigid)
            .unwrap();
        c.set_bond(GridPoint::new(1, 0), GridPoint::new(2, 0), BondType::Flexible)
            .unwrap();
        let text = render_ascii(&c, &t);
        assert_eq!(text.matches('a').count(), 3);
        assert!(text.contains("--"));
        assert!(text.contains("oo"));
        let svg = render_svg(&c, &t);
        // one filled and one hollow bond marker
        assert!(svg.contains("fill=\"#d22\""));
        assert!(svg.contains("stroke=\"#d22\""));
    }

    #[test]
    fn mixed_bond_styles_distinguishable() {
        let mut t = StateTable::new();
        let a = t.intern("m1");
        let b = t.intern("m2");
        let mut c = Configuration::new();
        c.add_monomer(GridPoint::new(0, 0), a).unwrap();
        c.add_monomer(GridPoint::new(0, 1), b).unwrap();
        c.add_monomer(GridPoint::new(1, 0), b).unwrap();
        c.set_bond(GridPoint::new(0, 0), GridPoint::new(0, 1), BondType::Rigid)
            .unwrap();
        c.set_bond(GridPoint::new(0, 0), GridPoint::new(1, 0), BondType::Flexible)
            .unwrap();
        let text = render_ascii(&c, &t);
        assert!(text.contains('\\'));
        assert!(text.contains("oo"));
    }
}
