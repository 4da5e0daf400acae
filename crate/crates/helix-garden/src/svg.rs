//! Deterministic SVG rendering of polygons, hulls, pockets and guard
//! wedges. Rendering converts rationals to floats for coordinates only;
//! nothing here feeds back into the exact pipeline.

use crate::geom::{convex_hull, Point, Polygon};
use crate::guards::GuardSet;
use crate::helix::pocket;
use crate::scalar::to_f64;

#[derive(Debug, Clone, Copy, Default)]
pub struct RenderOptions {
    pub show_hull: bool,
    pub show_pocket: bool,
    pub show_guards: bool,
}

struct Frame {
    min_x: f64,
    min_y: f64,
    scale: f64,
    height: f64,
}

impl Frame {
    fn map(&self, p: &Point) -> (f64, f64) {
        self.map_f64((to_f64(&p.x), to_f64(&p.y)))
    }

    fn map_f64(&self, (px, py): (f64, f64)) -> (f64, f64) {
        let x = (px - self.min_x) * self.scale;
        // flip y: SVG grows downward
        let y = self.height - (py - self.min_y) * self.scale;
        (x, y)
    }
}

fn path_of(frame: &Frame, pts: &[Point]) -> String {
    let mapped: Vec<(f64, f64)> = pts.iter().map(|p| frame.map(p)).collect();
    path_of_f64(&mapped)
}

fn path_of_f64(pts: &[(f64, f64)]) -> String {
    let mut d = String::new();
    for (i, (x, y)) in pts.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        d.push_str(&format!("{cmd}{x:.4} {y:.4} "));
    }
    d.push('Z');
    d
}

/// Render a polygon (optionally with hull, pocket and guard wedges) as a
/// self-contained SVG document. Identical inputs yield identical bytes.
pub fn render(poly: &Polygon, guards: Option<&GuardSet>, opts: RenderOptions) -> String {
    let xs: Vec<f64> = poly.vertices().iter().map(|p| to_f64(&p.x)).collect();
    let ys: Vec<f64> = poly.vertices().iter().map(|p| to_f64(&p.y)).collect();
    let (min_x, max_x) = bounds(&xs);
    let (min_y, max_y) = bounds(&ys);
    let w = (max_x - min_x).max(1e-9);
    let h = (max_y - min_y).max(1e-9);
    let margin = 0.1 * w.max(h);
    let scale = 640.0 / (w.max(h) + 2.0 * margin);
    let frame = Frame {
        min_x: min_x - margin,
        min_y: min_y - margin,
        scale,
        height: (h + 2.0 * margin) * scale,
    };
    let width_px = (w + 2.0 * margin) * scale;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" \
         viewBox=\"0 0 {:.4} {:.4}\">\n",
        width_px, frame.height, width_px, frame.height
    ));

    if opts.show_guards {
        if let Some(gs) = guards {
            for (label, g) in gs.iter() {
                let region = wedge_clip(g, &frame, width_px);
                if !region.is_empty() {
                    let mut d = String::new();
                    for poly_part in &region {
                        let mapped: Vec<(f64, f64)> =
                            poly_part.iter().map(|p| frame.map_f64(*p)).collect();
                        d.push_str(&path_of_f64(&mapped));
                        d.push(' ');
                    }
                    out.push_str(&format!(
                        "  <path d=\"{}\" fill=\"#4477aa\" fill-opacity=\"0.15\" \
                         fill-rule=\"nonzero\" stroke=\"none\"><title>{}</title></path>\n",
                        d.trim_end(),
                        label
                    ));
                }
                let (ax, ay) = frame.map(&g.apex);
                out.push_str(&format!(
                    "  <circle cx=\"{ax:.4}\" cy=\"{ay:.4}\" r=\"4\" fill=\"#4477aa\"/>\n"
                ));
            }
        }
    }

    if opts.show_hull {
        if let Ok(hull) = convex_hull(poly.vertices()) {
            out.push_str(&format!(
                "  <path d=\"{}\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\" \
                 stroke-dasharray=\"6 4\"/>\n",
                path_of(&frame, hull.vertices())
            ));
        }
    }

    if opts.show_pocket {
        if let Ok(pk) = pocket(poly) {
            out.push_str(&format!(
                "  <path d=\"{}\" fill=\"#ee8866\" fill-opacity=\"0.35\" stroke=\"none\"/>\n",
                path_of(&frame, pk.vertices())
            ));
        }
    }

    out.push_str(&format!(
        "  <path d=\"{}\" fill=\"#66bb66\" fill-opacity=\"0.25\" stroke=\"#225522\" \
         stroke-width=\"2\"/>\n",
        path_of(&frame, poly.vertices())
    ));

    for (i, p) in poly.vertices().iter().enumerate() {
        let (x, y) = frame.map(p);
        out.push_str(&format!(
            "  <circle cx=\"{x:.4}\" cy=\"{y:.4}\" r=\"3\" fill=\"#225522\"/>\n"
        ));
        out.push_str(&format!(
            "  <text x=\"{:.4}\" y=\"{:.4}\" font-size=\"12\" fill=\"#222222\">{}</text>\n",
            x + 5.0,
            y - 5.0,
            i + 1
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in v {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    (lo, hi)
}

/// Clip a wedge to the viewport rectangle. A convex wedge is the
/// intersection of two half-planes; a reflex wedge is their union, returned
/// as two overlapping parts painted with fill-rule nonzero.
fn wedge_clip(g: &crate::guards::AngleGuard, frame: &Frame, width_px: f64) -> Vec<Vec<(f64, f64)>> {
    // viewport corners in world coordinates
    let x0 = frame.min_x;
    let y0 = frame.min_y;
    let x1 = frame.min_x + width_px / frame.scale;
    let y1 = frame.min_y + frame.height / frame.scale;
    let rect: Vec<(f64, f64)> = vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1)];

    let apex = (to_f64(&g.apex.x), to_f64(&g.apex.y));
    let d1 = (approx(&g.ray1.dx), approx(&g.ray1.dy));
    let d2 = (approx(&g.ray2.dx), approx(&g.ray2.dy));

    // half-plane h1: cross(d1, p - apex) >= 0, h2: cross(d2, p - apex) <= 0
    let clip = |poly: &[(f64, f64)], d: (f64, f64), keep_nonneg: bool| -> Vec<(f64, f64)> {
        let side = |p: &(f64, f64)| {
            let v = d.0 * (p.1 - apex.1) - d.1 * (p.0 - apex.0);
            if keep_nonneg {
                v
            } else {
                -v
            }
        };
        let mut out = Vec::new();
        let n = poly.len();
        for i in 0..n {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            let sa = side(&a);
            let sb = side(&b);
            if sa >= 0.0 {
                out.push(a);
            }
            if (sa > 0.0 && sb < 0.0) || (sa < 0.0 && sb > 0.0) {
                let t = sa / (sa - sb);
                out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
            }
        }
        out
    };

    if !g.reflex {
        let part = clip(&clip(&rect, d1, true), d2, false);
        if part.len() >= 3 {
            vec![part]
        } else {
            Vec::new()
        }
    } else {
        let mut parts = Vec::new();
        let p1 = clip(&rect, d1, true);
        if p1.len() >= 3 {
            parts.push(p1);
        }
        let p2 = clip(&rect, d2, false);
        if p2.len() >= 3 {
            parts.push(p2);
        }
        parts
    }
}

fn approx(i: &num_bigint::BigInt) -> f64 {
    i.to_string().parse::<f64>().unwrap_or(0.0)
}
