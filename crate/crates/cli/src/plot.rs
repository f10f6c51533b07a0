//! Deterministic SVG rendering of cycles in the plane.

use std::fmt::Write as _;

use num_traits::ToPrimitive;
use tropcycle::cycle::TropicalCycle;
use tropcycle::json::format_rational;
use tropcycle::linalg::{rat, Rat};
use tropcycle::lp::Constraint;
use tropcycle::polyhedron::Polyhedron;

const SIZE: f64 = 480.0;
const PALETTE: [&str; 6] = ["#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400", "#555555"];

/// Axis-aligned viewing window `[xmin, xmax] x [ymin, ymax]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BBox {
    pub xmin: Rat,
    pub ymin: Rat,
    pub xmax: Rat,
    pub ymax: Rat,
}

impl BBox {
    fn polyhedron(&self) -> Polyhedron {
        let c = |a: i64, b: i64, r: &Rat| Constraint::new(vec![rat(a), rat(b)], r.clone());
        Polyhedron::new(
            2,
            vec![c(1, 0, &self.xmin), c(0, 1, &self.ymin), c(-1, 0, &-self.xmax.clone()), c(0, -1, &-self.ymax.clone())],
            vec![],
        )
    }

    /// The vertices of all cells padded by 1, and at least `[-2, 2]^2`.
    pub fn around(cycles: &[TropicalCycle]) -> BBox {
        let mut b = BBox { xmin: rat(-2), ymin: rat(-2), xmax: rat(2), ymax: rat(2) };
        for v in cycles.iter().flat_map(|c| c.cells()).flat_map(|c| c.poly.vrep().vertices) {
            b.xmin = b.xmin.min(&v[0] - rat(1));
            b.xmax = b.xmax.max(&v[0] + rat(1));
            b.ymin = b.ymin.min(&v[1] - rat(1));
            b.ymax = b.ymax.max(&v[1] + rat(1));
        }
        b
    }
}

fn f(x: &Rat) -> f64 {
    x.to_f64().expect("finite coordinate")
}

fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn exact_point(p: &[Rat]) -> String {
    format!("({})", p.iter().map(format_rational).collect::<Vec<_>>().join(", "))
}

struct Canvas {
    bbox: BBox,
    scale: f64,
}

impl Canvas {
    fn x(&self, v: &Rat) -> String {
        fmt6((f(v) - f(&self.bbox.xmin)) * self.scale)
    }

    fn y(&self, v: &Rat) -> String {
        fmt6((f(&self.bbox.ymax) - f(v)) * self.scale)
    }
}

fn sort_around_centroid(mut pts: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    let k = Rat::from_integer(pts.len().into());
    let cx = pts.iter().map(|p| p[0].clone()).sum::<Rat>() / &k;
    let cy = pts.iter().map(|p| p[1].clone()).sum::<Rat>() / &k;
    pts.sort_by(|a, b| {
        let ta = f(&(&a[1] - &cy)).atan2(f(&(&a[0] - &cx)));
        let tb = f(&(&b[1] - &cy)).atan2(f(&(&b[0] - &cx)));
        ta.total_cmp(&tb).then_with(|| a.cmp(b))
    });
    pts
}

/// Render the cycles into one SVG document. Every input gets its own
/// stroke class `cycle-i`; weights are drawn as labels.
pub fn render(cycles: &[TropicalCycle], bbox: &BBox) -> String {
    let width = f(&bbox.xmax) - f(&bbox.xmin);
    let height = f(&bbox.ymax) - f(&bbox.ymin);
    let scale = SIZE / width.max(height);
    let canvas = Canvas { bbox: bbox.clone(), scale };
    let clip = bbox.polyhedron();

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = fmt6(width * scale),
        h = fmt6(height * scale)
    )
    .unwrap();
    svg.push_str("<style>\n");
    svg.push_str("text { font-family: sans-serif; font-size: 12px; }\n");
    for i in 0..cycles.len() {
        let color = PALETTE[i % PALETTE.len()];
        writeln!(svg, ".cycle-{i} {{ stroke: {color}; stroke-width: 2; fill: {color}; fill-opacity: 0.15; }}").unwrap();
        writeln!(svg, ".label-{i} {{ fill: {color}; }}").unwrap();
    }
    svg.push_str("</style>\n");

    for (i, cycle) in cycles.iter().enumerate() {
        writeln!(svg, r#"<g class="cycle-{i}">"#).unwrap();
        let mut labels = Vec::new();
        for cell in cycle.cells() {
            let piece = cell.poly.meet(&clip);
            if piece.is_empty() {
                continue;
            }
            let title = cell_title(&cell.poly, cell.weight);
            let verts = piece.vrep().vertices;
            match verts.len() {
                1 => {
                    let p = &verts[0];
                    writeln!(
                        svg,
                        r#"<circle cx="{}" cy="{}" r="4"><title>{title}</title></circle>"#,
                        canvas.x(&p[0]),
                        canvas.y(&p[1])
                    )
                    .unwrap();
                    labels.push((p.clone(), cell.weight));
                }
                2 if cell.poly.dim() == 1 => {
                    let (a, b) = (&verts[0], &verts[1]);
                    writeln!(
                        svg,
                        r#"<line x1="{}" y1="{}" x2="{}" y2="{}"><title>{title}</title></line>"#,
                        canvas.x(&a[0]),
                        canvas.y(&a[1]),
                        canvas.x(&b[0]),
                        canvas.y(&b[1])
                    )
                    .unwrap();
                    let half = Rat::new(1.into(), 2.into());
                    labels.push((vec![(&a[0] + &b[0]) * &half, (&a[1] + &b[1]) * &half], cell.weight));
                }
                _ => {
                    let pts = sort_around_centroid(verts);
                    let path: Vec<String> =
                        pts.iter().map(|p| format!("{},{}", canvas.x(&p[0]), canvas.y(&p[1]))).collect();
                    writeln!(svg, r#"<polygon points="{}"><title>{title}</title></polygon>"#, path.join(" ")).unwrap();
                    let k = Rat::from_integer(pts.len().into());
                    let c = vec![
                        pts.iter().map(|p| p[0].clone()).sum::<Rat>() / &k,
                        pts.iter().map(|p| p[1].clone()).sum::<Rat>() / &k,
                    ];
                    labels.push((c, cell.weight));
                }
            }
        }
        svg.push_str("</g>\n");
        for (p, w) in labels {
            writeln!(
                svg,
                r#"<text class="label-{i}" x="{}" y="{}" dx="4" dy="-4">{w}</text>"#,
                canvas.x(&p[0]),
                canvas.y(&p[1])
            )
            .unwrap();
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// Exact description of a cell for the SVG tooltip.
fn cell_title(p: &Polyhedron, weight: i64) -> String {
    let v = p.vrep();
    let mut parts: Vec<String> = v.vertices.iter().map(|x| exact_point(x)).collect();
    parts.extend(v.rays.iter().map(|r| format!("ray ({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))));
    parts.extend(v.lineality.iter().map(|l| format!("line {}", exact_point(l))));
    format!("weight {weight}: {}", parts.join("; "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropcycle::linalg::rats;

    fn standard_line() -> TropicalCycle {
        TropicalCycle::star_of_rays(&rats(&[0, 0]), &[(vec![1, 0], 1), (vec![0, 1], 1), (vec![-1, -1], 1)])
    }

    #[test]
    fn line_has_three_segments() {
        let c = standard_line();
        let svg = render(std::slice::from_ref(&c), &BBox::around(std::slice::from_ref(&c)));
        assert_eq!(svg.matches("<line").count(), 3);
        assert_eq!(svg.matches(">1</text>").count(), 3);
        assert_eq!(svg, render(std::slice::from_ref(&c), &BBox::around(std::slice::from_ref(&c))));
    }

    #[test]
    fn overlay_uses_two_classes() {
        let a = standard_line();
        let b = a.translate(&rats(&[1, 1]));
        let svg = render(&[a.clone(), b.clone()], &BBox::around(&[a, b]));
        assert!(svg.contains(r#"class="cycle-0""#));
        assert!(svg.contains(r#"class="cycle-1""#));
    }

    #[test]
    fn titles_keep_exact_coordinates() {
        let c = standard_line().translate(&[Rat::new(1.into(), 3.into()), rat(0)]);
        let bbox = BBox { xmin: rat(-1), ymin: rat(-1), xmax: rat(2), ymax: rat(2) };
        let svg = render(std::slice::from_ref(&c), &bbox);
        assert!(svg.contains("(1/3, 0)"));
        assert!(svg.contains(r#"x1="213.333333""#), "{svg}");
    }
}
