use std::fmt::Write as _;

use crate::mapping::SubsystemCode;
use crate::metrics::CouplingHeatmap;

const CELL: u32 = 40;
const LEFT: u32 = 70;
const TOP: u32 = 90;

/// Linear ramp from white to dark red; `t` in [0, 1].
fn shade(t: f64) -> String {
    let lerp = |from: f64, to: f64| (from + (to - from) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(255.0, 140.0), lerp(255.0, 0.0), lerp(255.0, 0.0))
}

/// 16x16 grid, rows = includer, columns = included. Nonzero cells carry
/// their value; shading scales with value / max.
pub fn emit_heatmap_svg(heatmap: &CouplingHeatmap) -> String {
    let size = CELL * 16;
    let width = LEFT + size + 20;
    let height = TOP + size + 20;
    let max = heatmap.max();
    let mut svg = String::new();
    let _ = writeln!(svg, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\" font-family=\"Helvetica, Arial, sans-serif\">"
    );
    let engines = heatmap.engines.join(", ");
    let _ = writeln!(
        svg,
        "<title>Subsystem coupling heatmap ({})</title>",
        engines.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
    );
    let _ = writeln!(svg, "<rect width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">included (columns) / includer (rows), max {max}</text>",
        LEFT + size / 2
    );

    svg.push_str("<g class=\"axis columns\">\n");
    for (i, code) in SubsystemCode::ALL.iter().enumerate() {
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{code}</text>",
            LEFT + CELL * i as u32 + CELL / 2,
            TOP - 10
        );
    }
    svg.push_str("</g>\n<g class=\"axis rows\">\n");
    for (i, code) in SubsystemCode::ALL.iter().enumerate() {
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{code}</text>",
            LEFT - 8,
            TOP + CELL * i as u32 + CELL / 2 + 4
        );
    }
    svg.push_str("</g>\n<g class=\"cells\">\n");
    for (r, row_code) in SubsystemCode::ALL.iter().enumerate() {
        for (c, col_code) in SubsystemCode::ALL.iter().enumerate() {
            let value = heatmap.cells[r][c];
            let t = if max == 0 { 0.0 } else { value as f64 / max as f64 };
            let x = LEFT + CELL * c as u32;
            let y = TOP + CELL * r as u32;
            let _ = writeln!(
                svg,
                "<rect class=\"cell\" data-row=\"{row_code}\" data-col=\"{col_code}\" data-value=\"{value}\" x=\"{x}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{}\" stroke=\"#dddddd\"/>",
                shade(t)
            );
            if value > 0 {
                let ink = if t > 0.5 { "#ffffff" } else { "#000000" };
                let _ = writeln!(
                    svg,
                    "<text class=\"value\" data-row=\"{row_code}\" data-col=\"{col_code}\" x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" fill=\"{ink}\">{value}</text>",
                    x + CELL / 2,
                    y + CELL / 2 + 5
                );
            }
        }
    }
    svg.push_str("</g>\n</svg>\n");
    svg
}
