//! Static SVG persistence-diagram plots: dims 1 and 2 as birth/death
//! scatter over the diagonal. Infinite bars sit on the top border.

use srips_core::PersistenceDiagram;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 48.0;

fn to_px(v: f64, r_max: f64) -> f64 {
    MARGIN + v / r_max * (SIZE - 2.0 * MARGIN)
}

fn to_py(v: f64, r_max: f64) -> f64 {
    SIZE - MARGIN - v / r_max * (SIZE - 2.0 * MARGIN)
}

pub fn diagram_svg(diagram: &PersistenceDiagram, r_max: f64) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" \
         viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    s.push_str(&format!(
        "<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n"
    ));
    // Axes.
    let x0 = to_px(0.0, r_max);
    let y0 = to_py(0.0, r_max);
    let x1 = to_px(r_max, r_max);
    let y1 = to_py(r_max, r_max);
    s.push_str(&format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n"
    ));
    s.push_str(&format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
    ));
    // Diagonal.
    s.push_str(&format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y1}\" stroke=\"#999\" \
         stroke-dasharray=\"4 3\"/>\n"
    ));
    // Ticks every quarter.
    for i in 0..=4 {
        let v = r_max * i as f64 / 4.0;
        let px = to_px(v, r_max);
        let py = to_py(v, r_max);
        s.push_str(&format!(
            "<line x1=\"{px}\" y1=\"{y0}\" x2=\"{px}\" y2=\"{}\" stroke=\"black\"/>\n",
            y0 + 4.0
        ));
        s.push_str(&format!(
            "<text x=\"{px}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{v:.2}</text>\n",
            y0 + 18.0
        ));
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{py}\" x2=\"{x0}\" y2=\"{py}\" stroke=\"black\"/>\n",
            x0 - 4.0
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{v:.2}</text>\n",
            x0 - 8.0,
            py + 4.0
        ));
    }
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">birth</text>\n",
        SIZE / 2.0,
        SIZE - 10.0
    ));
    s.push_str(&format!(
        "<text x=\"14\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" \
         transform=\"rotate(-90 14 {})\">death</text>\n",
        SIZE / 2.0,
        SIZE / 2.0
    ));
    // Legend.
    s.push_str(&format!(
        "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"#1f77b4\"/>\
         <text x=\"{}\" y=\"{}\" font-size=\"11\">dim 1</text>\n",
        x0 + 12.0,
        y1 + 8.0,
        x0 + 20.0,
        y1 + 12.0
    ));
    s.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"8\" height=\"8\" fill=\"#d62728\"/>\
         <text x=\"{}\" y=\"{}\" font-size=\"11\">dim 2</text>\n",
        x0 + 72.0,
        y1 + 4.0,
        x0 + 84.0,
        y1 + 12.0
    ));
    for bar in &diagram.bars {
        if bar.dim != 1 && bar.dim != 2 {
            continue;
        }
        let px = to_px(bar.birth.min(r_max), r_max);
        let (py, stroke) = match bar.death {
            Some(d) => (to_py(d.min(r_max), r_max), "none"),
            // Infinite bars: hollow marker on the top border.
            None => (y1, "black"),
        };
        match bar.dim {
            1 => s.push_str(&format!(
                "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"3.5\" fill=\"#1f77b4\" \
                 fill-opacity=\"0.75\" stroke=\"{stroke}\"/>\n"
            )),
            _ => s.push_str(&format!(
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"7\" height=\"7\" fill=\"#d62728\" \
                 fill-opacity=\"0.75\" stroke=\"{stroke}\"/>\n",
                px - 3.5,
                py - 3.5
            )),
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use srips_core::{build_filtration, complex::FiltrationParams, exact_circle_metric, reduce};

    #[test]
    fn svg_is_well_formed_and_marks_bars() {
        let angles: Vec<f64> = (0..30).map(|i| i as f64 * 0.2).collect();
        let (m, _) = exact_circle_metric(&angles, 6.0).unwrap();
        let f = build_filtration(&m, &FiltrationParams::rips(2, 2.5).unwrap()).unwrap();
        let diagram = reduce(&f, 2).unwrap();
        let svg = diagram_svg(&diagram, 2.5);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        // The long dim-1 bar shows up as at least one circle marker.
        assert!(svg.matches("<circle").count() > 1);
    }
}
