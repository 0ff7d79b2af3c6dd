//! SVG 1.1 drawing of a slit-disk domain.
//!
//! Output depends only on the model: coordinates are printed with a fixed
//! number of decimals and elements are emitted in model order.

use std::fmt::Write;

use bloch_core::geometry::DomainModel;
use num_complex::Complex64;

const PX: f64 = 100.0;
const DECIMALS: usize = 5;

/// Screen coordinates; SVG's y axis points down.
fn coords(z: Complex64) -> (String, String) {
    (f(z.re), f(-z.im))
}

fn xy(z: Complex64) -> String {
    let (x, y) = coords(z);
    format!("{x},{y}")
}

fn f(x: f64) -> String {
    format!("{:.*}", DECIMALS, x)
}

pub fn svg(model: &DomainModel) -> String {
    let r = model.outer_circle_radius;
    let lo = -r - 0.2;
    let side = 2.0 * (r + 0.2);
    let stroke = 1.0 / PX;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{w}" viewBox="{lo} {lo} {side} {side}">"#,
        w = f(side * PX),
        lo = f(lo),
        side = f(side),
    );
    let _ = writeln!(s, "<title>Slit disk of radius {}</title>", f(r));
    let _ = writeln!(
        s,
        r##"<circle cx="0" cy="0" r="{}" fill="none" stroke="#000000" stroke-width="{}"/>"##,
        f(r),
        f(2.0 * stroke)
    );

    let _ = writeln!(s, r##"<g id="slits" stroke="#000000" stroke-width="{}">"##, f(2.0 * stroke));
    for sl in &model.slits {
        let (a, b) = (coords(sl.inner), coords(sl.outer));
        let _ = writeln!(s, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, a.0, a.1, b.0, b.1);
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r##"<g id="arcs" fill="none" stroke="#c0392b" stroke-width="{}">"##,
        f(2.0 * stroke)
    );
    for arc in &model.arcs {
        let pts: Vec<String> = arc.points().iter().map(|&z| xy(z)).collect();
        let _ = writeln!(s, r#"<polyline points="{}"/>"#, pts.join(" "));
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r##"<g id="extremal-disks" fill="none" stroke="#2e6da4" stroke-width="{}" stroke-dasharray="{} {}">"##,
        f(stroke),
        f(4.0 * stroke),
        f(3.0 * stroke)
    );
    for c in model.extremal_centers.iter().filter(|c| c.kind.is_extremal()) {
        let (x, y) = coords(c.center);
        let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="1"/>"#);
    }
    let _ = writeln!(s, "</g>");

    // Unit legend in the lower left corner.
    let (lx, ly) = (lo + 0.1, -lo - 0.1);
    let _ = writeln!(s, r##"<g id="legend" stroke="#000000" stroke-width="{}">"##, f(2.0 * stroke));
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
        f(lx),
        f(ly),
        f(lx + 1.0),
        f(ly)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="{}" font-family="sans-serif" stroke="none">1</text>"#,
        f(lx + 0.45),
        f(ly - 0.05),
        f(0.15)
    );
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}
