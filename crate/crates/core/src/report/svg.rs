use std::fmt::Write as _;

use crate::contact::{ParamMap, Point3, Slice2};
use crate::singular::{psi_singular_points, zigzag_birth_model, PsiCurve};
use crate::zoo::{cusp_set, gamma_m, sigma, z_axis_crossings, CurveExport, Sigma};
use crate::{Error, Result};

/// What to draw.
#[derive(Debug, Clone, PartialEq)]
pub enum FrontSource {
    Gamma(u32),
    Sigma { m: u32, w: f64 },
    Psi(f64),
    Birth(f64),
    File(CurveExport),
}

impl FrontSource {
    fn title(&self) -> String {
        match self {
            FrontSource::Gamma(m) => format!("gamma, m = {m}"),
            FrontSource::Sigma { m, w } => format!("sigma, m = {m}, w = {w}"),
            FrontSource::Psi(d) => format!("psi, delta = {d}"),
            FrontSource::Birth(t) => format!("birth, tau = {t}"),
            FrontSource::File(c) => format!("{} (file)", c.kind),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            FrontSource::Gamma(0) | FrontSource::Sigma { m: 0, .. } => {
                Err(Error::InvalidArgument("frequency must be positive".into()))
            }
            FrontSource::Sigma { w, .. } if !(0.0..=1.0).contains(w) => {
                Err(Error::InvalidArgument(format!("w = {w} outside [0, 1]")))
            }
            FrontSource::Psi(d) | FrontSource::Birth(d) if !d.is_finite() => {
                Err(Error::InvalidArgument("parameter must be finite".into()))
            }
            FrontSource::File(c) if c.samples.len() < 2 => Err(Error::InvalidArgument(
                "curve file needs at least two samples".into(),
            )),
            _ => Ok(()),
        }
    }

    /// `(x, z)` polyline, cusp positions and z-axis crossing positions.
    fn geometry(&self) -> (Vec<[f64; 2]>, Vec<[f64; 2]>, Vec<[f64; 2]>) {
        const N: usize = 2001;
        let sample = |f: &dyn Fn(f64) -> Point3, lo: f64, hi: f64| -> Vec<[f64; 2]> {
            (0..N)
                .map(|i| {
                    let p = f(lo + (hi - lo) * i as f64 / (N - 1) as f64);
                    [p.x, p.z]
                })
                .collect()
        };
        let xz = |p: Point3| [p.x, p.z];
        match self {
            FrontSource::Gamma(m) => {
                let m = *m;
                (
                    sample(&|t| gamma_m(m, t), -1.0, 1.0),
                    cusp_set(m).iter().map(|c| [c.x, c.z]).collect(),
                    z_axis_crossings(m)
                        .iter()
                        .map(|&t| xz(gamma_m(m, t)))
                        .collect(),
                )
            }
            FrontSource::Sigma { m, w } => {
                let (m, w) = (*m, *w);
                let slice = Slice2::new(Sigma::new(m), 1, w);
                let path = sample(&|t| slice.eval([t]), -1.0, 1.0);
                if w < 1.0 {
                    (
                        path,
                        cusp_set(m).iter().map(|c| xz(sigma(m, c.t, w))).collect(),
                        z_axis_crossings(m)
                            .iter()
                            .map(|&t| xz(sigma(m, t, w)))
                            .collect(),
                    )
                } else {
                    (path, vec![], vec![])
                }
            }
            FrontSource::Psi(d) | FrontSource::Birth(d) => {
                let d = *d;
                let r = PsiCurve::new(d).half_width.max(1.2 * (d.max(0.0)).sqrt());
                let path = sample(&|t| zigzag_birth_model(t, d), -r, r);
                let cusps = psi_singular_points(d)
                    .into_iter()
                    .map(|u| xz(zigzag_birth_model(u, d)))
                    .collect();
                let crossings = sign_changes(&path).into_iter().map(|i| path[i]).collect();
                (path, cusps, crossings)
            }
            FrontSource::File(c) => {
                let path: Vec<[f64; 2]> = c.samples.iter().map(|s| [s[1], s[3]]).collect();
                let cusps = x_turns(&path).into_iter().map(|i| path[i]).collect();
                let crossings = sign_changes(&path).into_iter().map(|i| path[i]).collect();
                (path, cusps, crossings)
            }
        }
    }
}

/// Indices where `x` changes sign between consecutive vertices.
fn sign_changes(path: &[[f64; 2]]) -> Vec<usize> {
    path.windows(2)
        .enumerate()
        .filter(|(_, w)| w[0][0] != 0.0 && (w[0][0] < 0.0) != (w[1][0] < 0.0))
        .map(|(i, _)| i + 1)
        .collect()
}

/// Interior vertices where `x` turns back.
fn x_turns(path: &[[f64; 2]]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut last = 0.0f64;
    for (i, w) in path.windows(2).enumerate() {
        let dx = w[1][0] - w[0][0];
        if dx == 0.0 {
            continue;
        }
        if last != 0.0 && (dx > 0.0) != (last > 0.0) {
            out.push(i);
        }
        last = dx;
    }
    out
}

/// A rendered figure and the marker counts it contains.
#[derive(Debug, Clone, PartialEq)]
pub struct SvgFigure {
    pub svg: String,
    pub cusp_markers: usize,
    pub crossing_markers: usize,
    pub panels: usize,
}

impl SvgFigure {
    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, &self.svg)?;
        Ok(())
    }
}

const PANEL_W: f64 = 480.0;
const PANEL_H: f64 = 400.0;
const MARGIN: f64 = 30.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn panel(out: &mut String, src: &FrontSource, offset: f64) -> (usize, usize) {
    let (path, cusps, crossings) = src.geometry();
    let finite = path.iter().filter(|p| p[0].is_finite() && p[1].is_finite());
    let (mut x0, mut x1, mut z0, mut z1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in finite {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        z0 = z0.min(p[1]);
        z1 = z1.max(p[1]);
    }
    let sx = (PANEL_W - 2.0 * MARGIN) / (x1 - x0).max(1e-12);
    let sz = (PANEL_H - 2.0 * MARGIN) / (z1 - z0).max(1e-12);
    let map = |p: [f64; 2]| {
        (
            offset + MARGIN + (p[0] - x0) * sx,
            PANEL_H - MARGIN - (p[1] - z0) * sz,
        )
    };

    let _ = writeln!(
        out,
        r##"<g class="panel"><rect x="{offset:.1}" y="0" width="{PANEL_W}" height="{PANEL_H}" fill="white" stroke="#ccc"/>"##
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="18" font-family="sans-serif" font-size="13">{}</text>"#,
        offset + MARGIN,
        escape(&src.title())
    );
    if x0 < 0.0 && x1 > 0.0 {
        let (ax, _) = map([0.0, 0.0]);
        let _ = writeln!(
            out,
            r##"<line class="axis" x1="{ax:.2}" y1="{MARGIN}" x2="{ax:.2}" y2="{:.1}" stroke="#999" stroke-dasharray="4 3"/>"##,
            PANEL_H - MARGIN
        );
    }
    out.push_str(r#"<polyline class="front" fill="none" stroke="black" stroke-width="1" points=""#);
    for (i, p) in path
        .iter()
        .filter(|p| p[0].is_finite() && p[1].is_finite())
        .enumerate()
    {
        let (a, b) = map(*p);
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{a:.2},{b:.2}");
    }
    out.push_str("\"/>\n");
    for &c in &cusps {
        let (a, b) = map(c);
        let _ = writeln!(
            out,
            r#"<circle class="cusp" cx="{a:.2}" cy="{b:.2}" r="3" fill="none" stroke="blue"/>"#
        );
    }
    for &c in &crossings {
        let (a, b) = map(c);
        let _ = writeln!(
            out,
            r#"<circle class="crossing" cx="{a:.2}" cy="{b:.2}" r="2.5" fill="red"/>"#
        );
    }
    out.push_str("</g>\n");
    (cusps.len(), crossings.len())
}

/// Front projection `(x, z)` of one source.
pub fn plot_front(source: &FrontSource) -> Result<SvgFigure> {
    plot_fronts(std::slice::from_ref(source))
}

/// Side-by-side panels, left to right.
pub fn plot_fronts(sources: &[FrontSource]) -> Result<SvgFigure> {
    if sources.is_empty() {
        return Err(Error::InvalidArgument("nothing to plot".into()));
    }
    for s in sources {
        s.validate()?;
    }
    let width = PANEL_W * sources.len() as f64;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{PANEL_H}\" viewBox=\"0 0 {width} {PANEL_H}\">\n"
    );
    let (mut cusps, mut crossings) = (0, 0);
    for (k, s) in sources.iter().enumerate() {
        let (a, b) = panel(&mut svg, s, k as f64 * PANEL_W);
        cusps += a;
        crossings += b;
    }
    svg.push_str("</svg>\n");
    Ok(SvgFigure {
        svg,
        cusp_markers: cusps,
        crossing_markers: crossings,
        panels: sources.len(),
    })
}
