//! Static 800×800 drawing of a configuration: arrows from the origin, the unit
//! circle and index labels. Output depends only on the input coordinates.

use std::fmt::Write;

use balconf::Configuration;

pub const SIZE: f64 = 800.0;
const CENTER: f64 = SIZE / 2.0;
const REACH: f64 = 330.0;
const LABEL_OFFSET: f64 = 18.0;

/// Fixed three-decimal coordinate, never printed as `-0.000`.
fn px(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

pub fn render(c: &Configuration<f64>) -> String {
    let scale = REACH / c.max_norm().max(1.0);
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#
    );
    let _ = writeln!(
        w,
        r##"<defs><marker id="head" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="7" markerHeight="7" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#1f4e79"/></marker></defs>"##
    );
    let _ = writeln!(w, r#"<rect width="800" height="800" fill="white"/>"#);
    let _ = writeln!(
        w,
        r##"<line x1="20.000" y1="400.000" x2="780.000" y2="400.000" stroke="#d0d0d0"/>"##
    );
    let _ = writeln!(
        w,
        r##"<line x1="400.000" y1="20.000" x2="400.000" y2="780.000" stroke="#d0d0d0"/>"##
    );
    let _ = writeln!(
        w,
        r##"<circle cx="400.000" cy="400.000" r="{}" fill="none" stroke="#888888" stroke-dasharray="6 4"/>"##,
        px(scale)
    );
    for (i, v) in c.vectors().iter().enumerate() {
        let (dx, dy) = (v.x * scale, -v.y * scale);
        let len = dx.hypot(dy);
        let (lx, ly) = (
            CENTER + dx + LABEL_OFFSET * dx / len,
            CENTER + dy + LABEL_OFFSET * dy / len,
        );
        let _ = writeln!(
            w,
            r##"<line x1="400.000" y1="400.000" x2="{}" y2="{}" stroke="#1f4e79" stroke-width="2" marker-end="url(#head)"/>"##,
            px(CENTER + dx),
            px(CENTER + dy)
        );
        let _ = writeln!(
            w,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="14" text-anchor="middle" dominant-baseline="middle">{i}</text>"#,
            px(lx),
            px(ly)
        );
    }
    let _ = writeln!(w, "</svg>");
    out
}
