//! Staircase plots of profiles as self-contained SVG documents.

use std::fmt::Write as _;

use algostat::Profile;

const WIDTH: u32 = 560;
const HEIGHT: u32 = 420;
const LEFT: u32 = 60;
const RIGHT: u32 = 150;
const TOP: u32 = 20;
const BOTTOM: u32 = 50;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders the profiles overlaid, complexity on the horizontal axis and
/// log-cardinality on the vertical axis. Output bytes depend only on the
/// input.
pub fn plot_profiles(profiles: &[(String, Profile)], title: &str) -> String {
    let pts = profiles
        .iter()
        .flat_map(|(_, p)| p.frontier().iter().copied());
    let (mut max_m, mut max_l) = (4u32, 4u32);
    for (a, b) in pts {
        max_m = max_m.max(a + 2);
        max_l = max_l.max(b + 2);
    }
    let pw = (WIDTH - LEFT - RIGHT) as f64;
    let ph = (HEIGHT - TOP - BOTTOM) as f64;
    let sx = |m: f64| LEFT as f64 + m / max_m as f64 * pw;
    let sy = |l: f64| (HEIGHT - BOTTOM) as f64 - l / max_l as f64 * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    // axes
    let (x0, y0) = (sx(0.0), sy(0.0));
    let _ = writeln!(
        s,
        r#"<line x1="{x0:.1}" y1="{y0:.1}" x2="{:.1}" y2="{y0:.1}" stroke="black"/>"#,
        sx(max_m as f64)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{x0:.1}" y1="{y0:.1}" x2="{x0:.1}" y2="{:.1}" stroke="black"/>"#,
        sy(max_l as f64)
    );
    let step = |max: u32| (max / 10).max(1);
    for m in (0..=max_m).step_by(step(max_m) as usize) {
        let x = sx(m as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.1}" y1="{y0:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{m}</text>"#,
            y0 + 4.0,
            y0 + 16.0
        );
    }
    for l in (0..=max_l).step_by(step(max_l) as usize) {
        let y = sy(l as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{x0:.1}" y2="{y:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="end">{l}</text>"#,
            x0 - 4.0,
            x0 - 7.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{}" text-anchor="middle">complexity</text>"#,
        LEFT as f64 + pw / 2.0,
        HEIGHT - 12
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">log-cardinality</text>"#,
        TOP as f64 + ph / 2.0,
        TOP as f64 + ph / 2.0
    );
    // staircases
    for (i, (label, p)) in profiles.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let f = p.frontier();
        if !f.is_empty() {
            let mut d = format!("M {:.1} {:.1}", sx(f[0].0 as f64), sy(max_l as f64));
            for (j, &(a, b)) in f.iter().enumerate() {
                let _ = write!(d, " L {:.1} {:.1}", sx(a as f64), sy(b as f64));
                let next = f.get(j + 1).map_or(max_m, |&(na, _)| na);
                let _ = write!(d, " L {:.1} {:.1}", sx(next as f64), sy(b as f64));
            }
            let _ = writeln!(
                s,
                r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="2" stroke-dasharray="{}"/>"#,
                if i == 0 {
                    "none".to_string()
                } else {
                    format!("{} 3", 4 + 2 * i)
                }
            );
        }
        let ly = TOP as f64 + 14.0 + 16.0 * i as f64;
        let lx = (WIDTH - RIGHT + 12) as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 18.0,
            lx + 22.0,
            ly + 4.0,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}
