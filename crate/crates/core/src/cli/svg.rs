//! Grayscale forest plot of effect estimates.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::estimators::Method;
use crate::inference::EffectEstimates;

const WIDTH: f64 = 640.0;
const LEFT: f64 = 110.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const ROW: f64 = 44.0;
const BOTTOM: f64 = 50.0;

/// Renders one row per effect with one marker group per method. OLS uses an
/// open circle and a solid whisker, the semiparametric fit a filled circle
/// and a dashed whisker.
pub fn render_forest_svg(estimates: &[(Method, &EffectEstimates)]) -> Result<String> {
    let Some((_, first)) = estimates.first() else {
        return Err(Error::InvalidSpec(
            "forest plot needs at least one method".into(),
        ));
    };
    let names = first.names();
    if estimates.iter().any(|(_, e)| e.names() != names) {
        return Err(Error::InvalidSpec(
            "forest plot methods must report the same effects".into(),
        ));
    }

    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for (_, e) in estimates {
        lo = e.ci_lower.iter().fold(lo, |a, &b| a.min(b));
        hi = e.ci_upper.iter().fold(hi, |a, &b| a.max(b));
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidSpec(
            "forest plot needs finite intervals".into(),
        ));
    }
    let pad = ((hi - lo) * 0.05).max(1e-9);
    let (lo, hi) = (lo - pad, hi + pad);
    let plot_w = WIDTH - LEFT - RIGHT;
    let sx = |v: f64| LEFT + (v - lo) / (hi - lo) * plot_w;
    let height = TOP + ROW * names.len() as f64 + BOTTOM;
    let axis_y = TOP + ROW * names.len() as f64;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let z = sx(0.0);
    let _ = writeln!(
        s,
        r##"<line class="zero" x1="{z:.2}" y1="{TOP}" x2="{z:.2}" y2="{axis_y}" stroke="#888888" stroke-width="1"/>"##
    );
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{axis_y}" x2="{:.2}" y2="{axis_y}" stroke="black"/>"#,
        WIDTH - RIGHT
    );
    for k in 0..=4 {
        let v = lo + (hi - lo) * k as f64 / 4.0;
        let x = sx(v);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{axis_y}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            axis_y + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{v:.3}</text>"#,
            axis_y + 18.0
        );
    }

    let m = estimates.len() as f64;
    for (i, name) in names.iter().enumerate() {
        let row_mid = TOP + ROW * (i as f64 + 0.5);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{name}</text>"#,
            LEFT - 10.0,
            row_mid + 4.0
        );
        for (k, (method, e)) in estimates.iter().enumerate() {
            let y = row_mid + (k as f64 - (m - 1.0) / 2.0) * 12.0;
            let (dash, fill) = match method {
                Method::Ols => ("", "white"),
                Method::Semiparametric => (r#" stroke-dasharray="5,3""#, "black"),
            };
            let _ = writeln!(
                s,
                r#"<g class="marker" data-method="{method}" data-effect="{name}">"#
            );
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black" stroke-width="1.5"{dash}/>"#,
                sx(e.ci_lower[i]),
                sx(e.ci_upper[i])
            );
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{y:.2}" r="4" fill="{fill}" stroke="black" stroke-width="1.5"/>"#,
                sx(e.values[i])
            );
            let _ = writeln!(s, "</g>");
        }
    }

    let ly = height - 12.0;
    let mut lx = LEFT;
    for (method, _) in estimates {
        let (dash, fill) = match method {
            Method::Ols => ("", "white"),
            Method::Semiparametric => (r#" stroke-dasharray="5,3""#, "black"),
        };
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="black" stroke-width="1.5"{dash}/>"#,
            lx + 30.0
        );
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{ly:.2}" r="4" fill="{fill}" stroke="black" stroke-width="1.5"/>"#,
            lx + 15.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{method}</text>"#,
            lx + 38.0,
            ly + 4.0
        );
        lx += 170.0;
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_forest_svg(estimates: &[(Method, &EffectEstimates)], path: &Path) -> Result<()> {
    let svg = render_forest_svg(estimates)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}
