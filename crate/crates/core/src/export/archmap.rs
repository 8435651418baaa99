//! Architectural map rendering.
//!
//! Up to four centre subsystems sit in a 2x2 block in the middle; every other
//! code is placed on a circle in alphabetical order, clockwise from the top.
//! Undetected subsystems keep their slot on the circle but are drawn as dark
//! grey boxes with light grey text and never have arrows.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mapping::SubsystemCode;
use crate::metrics::Rankings;
use crate::model::ArchModel;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 800.0;
const CX: f64 = 380.0;
const CY: f64 = 420.0;
const RING_RADIUS: f64 = 300.0;
const BOX_W: f64 = 72.0;
const BOX_H: f64 = 32.0;

const UNDETECTED_FILL: &str = "#404040";
const UNDETECTED_TEXT: &str = "#c0c0c0";

/// Fill colour of each subsystem box.
pub fn palette(code: SubsystemCode) -> &'static str {
    match code {
        SubsystemCode::AUD => "#e6194b",
        SubsystemCode::COR => "#3cb44b",
        SubsystemCode::DEB => "#ffe119",
        SubsystemCode::EDI => "#4363d8",
        SubsystemCode::FES => "#f58231",
        SubsystemCode::GMP => "#911eb4",
        SubsystemCode::HID => "#46f0f0",
        SubsystemCode::LLR => "#f032e6",
        SubsystemCode::OMP => "#bcf60c",
        SubsystemCode::PHY => "#fabebe",
        SubsystemCode::PLA => "#008080",
        SubsystemCode::RES => "#e6beff",
        SubsystemCode::SDK => "#9a6324",
        SubsystemCode::SGC => "#fffac8",
        SubsystemCode::SKA => "#800000",
        SubsystemCode::VFX => "#aaffc3",
        SubsystemCode::UNK => "#ffffff",
    }
}

fn text_colour(fill: &str) -> &'static str {
    let channel = |i: usize| u32::from_str_radix(&fill[i..i + 2], 16).unwrap_or(0) as f64;
    let luma = 0.299 * channel(1) + 0.587 * channel(3) + 0.114 * channel(5);
    if luma > 140.0 {
        "#000000"
    } else {
        "#ffffff"
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutSpec {
    pub center_codes: Vec<SubsystemCode>,
    pub ring_codes: Vec<SubsystemCode>,
    pub undetected_codes: Vec<SubsystemCode>,
}

impl LayoutSpec {
    /// Builds a layout from explicit centre codes and the detected set.
    pub fn new(center: &[SubsystemCode], detected: &BTreeSet<SubsystemCode>) -> Result<Self> {
        if center.len() > 4 {
            return Err(Error::Layout(format!("at most 4 centre codes, got {}", center.len())));
        }
        let mut seen = BTreeSet::new();
        for &code in center {
            if code == SubsystemCode::UNK || !detected.contains(&code) {
                return Err(Error::Layout(format!("centre code {code} is not a detected subsystem")));
            }
            if !seen.insert(code) {
                return Err(Error::Layout(format!("centre code {code} listed twice")));
            }
        }
        let ring_codes = detected
            .iter()
            .copied()
            .filter(|c| *c != SubsystemCode::UNK && !seen.contains(c))
            .collect();
        let undetected_codes = SubsystemCode::ALL
            .iter()
            .copied()
            .filter(|c| !detected.contains(c))
            .collect();
        Ok(LayoutSpec {
            center_codes: center.to_vec(),
            ring_codes,
            undetected_codes,
        })
    }

    /// Default layout: the top of the included-by ranking that is detected
    /// in this model goes to the centre.
    pub fn for_model(model: &ArchModel, rankings: &Rankings) -> Self {
        let detected = model.detected();
        let center: Vec<SubsystemCode> = rankings
            .center()
            .into_iter()
            .filter(|c| detected.contains(c))
            .collect();
        LayoutSpec::new(&center, &detected).expect("centre drawn from the detected set")
    }

    fn check(&self, model: &ArchModel) -> Result<()> {
        let mut all: Vec<SubsystemCode> = self
            .center_codes
            .iter()
            .chain(&self.ring_codes)
            .chain(&self.undetected_codes)
            .copied()
            .collect();
        all.sort();
        if all != SubsystemCode::ALL {
            return Err(Error::Layout(
                "centre, ring and undetected codes must partition the 16 subsystems".into(),
            ));
        }
        if self.center_codes.len() > 4 {
            return Err(Error::Layout("at most 4 centre codes".into()));
        }
        let placed: BTreeSet<SubsystemCode> = self
            .center_codes
            .iter()
            .chain(&self.ring_codes)
            .copied()
            .collect();
        if placed != model.detected() {
            return Err(Error::Layout(format!(
                "layout does not match the detected subsystems of {}",
                model.engine
            )));
        }
        Ok(())
    }

    /// Box centre of every code that is drawn.
    fn positions(&self, with_unk: bool) -> Vec<(SubsystemCode, f64, f64)> {
        const CENTER_SLOTS: [(f64, f64); 4] = [(-46.0, -26.0), (46.0, -26.0), (-46.0, 26.0), (46.0, 26.0)];
        let mut out: Vec<(SubsystemCode, f64, f64)> = self
            .center_codes
            .iter()
            .zip(CENTER_SLOTS)
            .map(|(&c, (dx, dy))| (c, CX + dx, CY + dy))
            .collect();
        let mut circle: Vec<SubsystemCode> = self
            .ring_codes
            .iter()
            .chain(&self.undetected_codes)
            .copied()
            .collect();
        circle.sort();
        let n = circle.len().max(1) as f64;
        for (i, code) in circle.into_iter().enumerate() {
            let angle = -std::f64::consts::FRAC_PI_2 + std::f64::consts::TAU * i as f64 / n;
            out.push((code, CX + RING_RADIUS * angle.cos(), CY + RING_RADIUS * angle.sin()));
        }
        if with_unk {
            out.push((SubsystemCode::UNK, WIDTH - BOX_W / 2.0 - 12.0, HEIGHT - BOX_H / 2.0 - 12.0));
        }
        out
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Point where the segment from a box centre towards (dx, dy) leaves the box.
fn box_exit(x: f64, y: f64, dx: f64, dy: f64) -> (f64, f64) {
    let tx = if dx.abs() > f64::EPSILON { (BOX_W / 2.0 + 3.0) / dx.abs() } else { f64::INFINITY };
    let ty = if dy.abs() > f64::EPSILON { (BOX_H / 2.0 + 3.0) / dy.abs() } else { f64::INFINITY };
    let t = tx.min(ty);
    (x + dx * t, y + dy * t)
}

/// Renders the model as a Graphviz document (with pinned `pos` attributes for
/// `neato -n`) and as a self-contained SVG.
pub fn emit_arch_map(model: &ArchModel, layout: &LayoutSpec) -> Result<(String, String)> {
    layout.check(model)?;
    let with_unk = model.nodes.contains_key(&SubsystemCode::UNK);
    let positions = layout.positions(with_unk);
    let pos_of = |code: SubsystemCode| {
        positions
            .iter()
            .find(|(c, _, _)| *c == code)
            .map(|&(_, x, y)| (x, y))
            .expect("every model node has a position")
    };
    let detected = model.detected();
    let is_drawn_live = |c: SubsystemCode| detected.contains(&c) || c == SubsystemCode::UNK;

    // DOT
    let mut dot = format!("digraph \"{}\" {{\n", dot_escape(&model.engine));
    dot.push_str("  graph [splines=true, overlap=false];\n");
    dot.push_str("  node [shape=box, style=\"rounded,filled\", fontname=\"Helvetica\"];\n");
    for &(code, x, y) in &positions {
        let (fill, text) = if is_drawn_live(code) {
            (palette(code), text_colour(palette(code)))
        } else {
            (UNDETECTED_FILL, UNDETECTED_TEXT)
        };
        let _ = writeln!(
            dot,
            "  \"{code}\" [pos=\"{:.1},{:.1}!\", fillcolor=\"{fill}\", fontcolor=\"{text}\"];",
            x,
            HEIGHT - y
        );
    }
    for (&(from, to), &weight) in &model.edges {
        let _ = writeln!(dot, "  \"{from}\" -> \"{to}\" [label=\"{weight}\"];");
    }
    dot.push_str("}\n");

    // SVG
    let mut svg = String::new();
    let _ = writeln!(svg, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"Helvetica, Arial, sans-serif\">"
    );
    let _ = writeln!(svg, "<title>{} architectural map</title>", xml_escape(&model.engine));
    svg.push_str("<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"7\" markerHeight=\"7\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#333333\"/></marker></defs>\n");
    let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{CX}\" y=\"32\" font-size=\"20\" text-anchor=\"middle\">{}</text>",
        xml_escape(&model.engine)
    );

    svg.push_str("<g class=\"edges\">\n");
    for (&(from, to), &weight) in &model.edges {
        let (x1, y1) = pos_of(from);
        let (path, lx, ly) = if from == to {
            let sx = x1 + BOX_W / 4.0;
            let sy = y1 - BOX_H / 2.0 - 2.0;
            let ex = x1 + BOX_W / 2.0 + 2.0;
            let ey = y1 - BOX_H / 4.0;
            (
                format!(
                    "M{sx:.1},{sy:.1} C{:.1},{:.1} {:.1},{:.1} {ex:.1},{ey:.1}",
                    sx,
                    sy - 34.0,
                    ex + 34.0,
                    ey
                ),
                ex + 18.0,
                sy - 12.0,
            )
        } else {
            let (x2, y2) = pos_of(to);
            let (dx, dy) = (x2 - x1, y2 - y1);
            let len = (dx * dx + dy * dy).sqrt().max(f64::EPSILON);
            // Offset opposite directions so A->B and B->A do not overlap.
            let (ox, oy) = (-dy / len * 4.0, dx / len * 4.0);
            let (sx, sy) = box_exit(x1, y1, dx, dy);
            let (ex, ey) = box_exit(x2, y2, -dx, -dy);
            let (sx, sy, ex, ey) = (sx + ox, sy + oy, ex + ox, ey + oy);
            (
                format!("M{sx:.1},{sy:.1} L{ex:.1},{ey:.1}"),
                (sx + ex) / 2.0 + ox * 2.0,
                (sy + ey) / 2.0 + oy * 2.0,
            )
        };
        let _ = writeln!(
            svg,
            "<g class=\"edge\" data-from=\"{from}\" data-to=\"{to}\"><path d=\"{path}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.2\" marker-end=\"url(#arrow)\"/><text x=\"{lx:.1}\" y=\"{ly:.1}\" font-size=\"11\" text-anchor=\"middle\" fill=\"#222222\">{weight}</text></g>"
        );
    }
    svg.push_str("</g>\n<g class=\"nodes\">\n");
    for &(code, x, y) in &positions {
        let live = is_drawn_live(code);
        let (fill, text, class) = if live {
            (palette(code), text_colour(palette(code)), "node detected")
        } else {
            (UNDETECTED_FILL, UNDETECTED_TEXT, "node undetected")
        };
        let _ = writeln!(
            svg,
            "<g class=\"{class}\" data-code=\"{code}\"><title>{}</title><rect x=\"{:.1}\" y=\"{:.1}\" width=\"{BOX_W}\" height=\"{BOX_H}\" rx=\"4\" fill=\"{fill}\" stroke=\"#222222\"/><text x=\"{x:.1}\" y=\"{:.1}\" font-size=\"14\" font-weight=\"bold\" text-anchor=\"middle\" fill=\"{text}\">{code}</text></g>",
            code.name(),
            x - BOX_W / 2.0,
            y - BOX_H / 2.0,
            y + 5.0
        );
    }
    svg.push_str("</g>\n</svg>\n");
    Ok((dot, svg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use SubsystemCode::*;

    fn model(nodes: &[SubsystemCode], edges: &[(SubsystemCode, SubsystemCode, usize)]) -> ArchModel {
        let mut m = ArchModel {
            engine: "demo".into(),
            ..ArchModel::default()
        };
        for &n in nodes {
            m.nodes.insert(n, 1);
        }
        for &(a, b, w) in edges {
            m.edges.insert((a, b), w);
        }
        m
    }

    #[test]
    fn two_boxes_one_arrow() {
        let m = model(&[FES, LLR], &[(FES, LLR, 1)]);
        let layout = LayoutSpec::new(&[], &m.detected()).unwrap();
        let (dot, svg) = emit_arch_map(&m, &layout).unwrap();
        assert_eq!(svg.matches("class=\"node detected\"").count(), 2);
        assert_eq!(svg.matches("class=\"node undetected\"").count(), 14);
        assert_eq!(svg.matches("class=\"edge\"").count(), 1);
        assert!(svg.contains("data-from=\"FES\" data-to=\"LLR\""));
        assert!(svg.contains(">1</text></g>"));
        assert!(dot.contains("\"FES\" -> \"LLR\" [label=\"1\"];"));
    }

    #[test]
    fn undetected_box_is_grey_without_arrows() {
        let m = model(&[AUD, COR], &[(AUD, COR, 2), (COR, COR, 1)]);
        let layout = LayoutSpec::new(&[COR], &m.detected()).unwrap();
        let (_, svg) = emit_arch_map(&m, &layout).unwrap();
        let omp = svg
            .lines()
            .find(|l| l.contains("data-code=\"OMP\""))
            .unwrap();
        assert!(omp.contains("node undetected"));
        assert!(omp.contains(UNDETECTED_FILL) && omp.contains(UNDETECTED_TEXT));
        assert!(!svg.contains("data-from=\"OMP\"") && !svg.contains("data-to=\"OMP\""));
    }

    #[test]
    fn centre_codes_sit_in_the_middle() {
        let m = model(&[AUD, COR, PLA], &[(AUD, PLA, 1), (COR, PLA, 1)]);
        let layout = LayoutSpec::new(&[PLA], &m.detected()).unwrap();
        let positions = layout.positions(false);
        let &(_, x, y) = positions.iter().find(|p| p.0 == PLA).unwrap();
        assert!((x - CX).abs() < 60.0 && (y - CY).abs() < 60.0);
        assert_eq!(positions.len(), 16);
        for &(code, x, y) in positions.iter().filter(|p| p.0 != PLA) {
            let r = ((x - CX).powi(2) + (y - CY).powi(2)).sqrt();
            assert!((r - RING_RADIUS).abs() < 1e-6, "{code}");
        }
    }

    #[test]
    fn layout_validation() {
        let m = model(&[AUD, COR], &[]);
        assert!(LayoutSpec::new(&[VFX], &m.detected()).is_err());
        assert!(LayoutSpec::new(&[AUD, AUD], &m.detected()).is_err());
        let other = model(&[AUD], &[]);
        let layout = LayoutSpec::new(&[], &other.detected()).unwrap();
        assert!(matches!(emit_arch_map(&m, &layout), Err(Error::Layout(_))));
        let mut broken = LayoutSpec::new(&[], &m.detected()).unwrap();
        broken.undetected_codes.pop();
        assert!(matches!(emit_arch_map(&m, &broken), Err(Error::Layout(_))));
    }

    #[test]
    fn unk_gets_its_own_box() {
        let m = model(&[AUD, UNK], &[(AUD, UNK, 1)]);
        let layout = LayoutSpec::new(&[], &m.detected()).unwrap();
        let (_, svg) = emit_arch_map(&m, &layout).unwrap();
        assert_eq!(svg.matches("<g class=\"node ").count(), 17);
        assert_eq!(svg.matches("class=\"edge\"").count(), 1);
    }

    #[test]
    fn output_is_deterministic() {
        let m = model(&[AUD, COR, VFX], &[(AUD, COR, 1), (COR, AUD, 3), (VFX, VFX, 2)]);
        let layout = LayoutSpec::new(&[COR], &m.detected()).unwrap();
        assert_eq!(emit_arch_map(&m, &layout).unwrap(), emit_arch_map(&m, &layout).unwrap());
    }
}
