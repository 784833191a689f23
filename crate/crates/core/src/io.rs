//! On-disk formats: point cloud CSV, metric files, diagram CSV reading.
//!
//! Clouds are plain CSV with an `x,y,z` header and an optional fourth
//! label column. Metrics are a text header (point count, provenance,
//! optional link radius) followed by the strictly lower triangle of the
//! distance matrix, one row per line. Diagrams are written by
//! [`crate::PersistenceDiagram::write_csv`] and read back here into
//! plain intervals.

use std::io::{BufRead, Write};

use crate::compare::SimpleBar;
use crate::error::{Error, Result};
use crate::metric::{FiniteMetric, PointCloud, Provenance};

pub fn write_cloud<W: Write>(cloud: &PointCloud, out: &mut W) -> Result<()> {
    match &cloud.labels {
        None => {
            writeln!(out, "x,y,z")?;
            for p in &cloud.points {
                writeln!(out, "{},{},{}", p[0], p[1], p[2])?;
            }
        }
        Some(labels) => {
            writeln!(out, "x,y,z,label")?;
            for (p, l) in cloud.points.iter().zip(labels) {
                writeln!(out, "{},{},{},{}", p[0], p[1], p[2], l)?;
            }
        }
    }
    Ok(())
}

pub fn read_cloud<R: BufRead>(input: R) -> Result<PointCloud> {
    let mut points = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with('x')) {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() < 3 {
            return Err(Error::Parse(format!(
                "cloud line {}: expected x,y,z, got {line:?}",
                lineno + 1
            )));
        }
        let mut p = [0.0f64; 3];
        for (k, f) in fields[..3].iter().enumerate() {
            p[k] = f.parse().map_err(|_| {
                Error::Parse(format!("cloud line {}: bad number {f:?}", lineno + 1))
            })?;
        }
        points.push(p);
        if fields.len() > 3 {
            labels.push(fields[3].to_string());
        }
    }
    if !labels.is_empty() && labels.len() != points.len() {
        return Err(Error::Parse("label column present on only some rows".into()));
    }
    let mut cloud = PointCloud::new(points);
    if !labels.is_empty() {
        cloud.labels = Some(labels);
    }
    Ok(cloud)
}

pub fn write_metric<W: Write>(metric: &FiniteMetric, out: &mut W) -> Result<()> {
    let n = metric.len();
    match metric.link_radius() {
        Some(r) => writeln!(out, "{} {} {}", n, metric.provenance, r)?,
        None => writeln!(out, "{} {}", n, metric.provenance)?,
    }
    let mut row = String::new();
    for i in 1..n {
        row.clear();
        for j in 0..i {
            if j > 0 {
                row.push(' ');
            }
            row.push_str(&metric.dist(i, j).to_string());
        }
        writeln!(out, "{row}")?;
    }
    Ok(())
}

/// Read a metric file. The inducing graph of a graph-geodesic metric is
/// not serialized; a metric read from disk answers distance queries but
/// localization paths fall back to two-point segments unless the metric
/// is rebuilt from its cloud.
pub fn read_metric<R: BufRead>(input: R) -> Result<FiniteMetric> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty metric file".into()))??;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 2 {
        return Err(Error::Parse(format!("bad metric header {header:?}")));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| Error::Parse(format!("bad point count {:?}", fields[0])))?;
    let provenance = match fields[1] {
        "exact-model" => Provenance::ExactModel,
        "graph-geodesic" => Provenance::GraphGeodesic,
        other => return Err(Error::Parse(format!("unknown provenance {other:?}"))),
    };
    let mut d = vec![0.0f64; n * n];
    for i in 1..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("metric file ends before row {i}")))??;
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != i {
            return Err(Error::Parse(format!(
                "metric row {i}: expected {i} entries, got {}",
                entries.len()
            )));
        }
        for (j, e) in entries.iter().enumerate() {
            let v: f64 = e
                .parse()
                .map_err(|_| Error::Parse(format!("metric row {i}: bad number {e:?}")))?;
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    FiniteMetric::from_matrix(n, d, provenance)
}

/// Read intervals back from a diagram CSV, ignoring attribution columns.
pub fn read_diagram_csv<R: BufRead>(input: R) -> Result<Vec<SimpleBar>> {
    let mut bars = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with("dim,") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 3 {
            return Err(Error::Parse(format!(
                "diagram line {}: expected at least dim,birth,death",
                lineno + 1
            )));
        }
        let dim: u8 = fields[0]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("diagram line {}: bad dim", lineno + 1)))?;
        let birth: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("diagram line {}: bad birth", lineno + 1)))?;
        let death_field = fields[2].trim();
        let death = if death_field.is_empty() {
            None
        } else {
            Some(death_field.parse().map_err(|_| {
                Error::Parse(format!("diagram line {}: bad death", lineno + 1))
            })?)
        };
        bars.push(SimpleBar { dim, birth, death });
    }
    Ok(bars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_filtration, FiltrationParams};
    use crate::metric::exact_circle_metric;
    use crate::persistence::reduce;

    #[test]
    fn cloud_roundtrip() {
        let mut cloud = PointCloud::new(vec![[0.0, 1.5, -2.25], [1e-9, 3.0, 4.0]]);
        cloud.labels = Some(vec!["a".into(), "b".into()]);
        let mut buf = Vec::new();
        write_cloud(&cloud, &mut buf).unwrap();
        let back = read_cloud(&buf[..]).unwrap();
        assert_eq!(back, cloud);
    }

    #[test]
    fn cloud_without_header_is_accepted() {
        let back = read_cloud("1,2,3\n4,5,6\n".as_bytes()).unwrap();
        assert_eq!(back.points, vec![[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]);
    }

    #[test]
    fn cloud_rejects_short_rows() {
        assert!(read_cloud("1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn metric_roundtrip() {
        let angles: Vec<f64> = (0..7).map(|i| i as f64 * 0.83).collect();
        let (m, _) = exact_circle_metric(&angles, 6.0).unwrap();
        let mut buf = Vec::new();
        write_metric(&m, &mut buf).unwrap();
        let back = read_metric(&buf[..]).unwrap();
        assert_eq!(back.len(), m.len());
        assert_eq!(back.provenance, m.provenance);
        for i in 0..m.len() {
            for j in 0..m.len() {
                assert_eq!(back.dist(i, j), m.dist(i, j));
            }
        }
    }

    #[test]
    fn metric_rejects_truncated_file() {
        assert!(read_metric("3 exact-model\n1.0\n".as_bytes()).is_err());
        assert!(read_metric("3 flat-earth\n1.0\n1.0 1.0\n".as_bytes()).is_err());
    }

    #[test]
    fn diagram_roundtrip_through_csv() {
        let angles: Vec<f64> = (0..12).map(|i| i as f64 * 0.5).collect();
        let (m, _) = exact_circle_metric(&angles, 6.0).unwrap();
        let f = build_filtration(&m, &FiltrationParams::rips(2, 2.4).unwrap()).unwrap();
        let diagram = reduce(&f, 2).unwrap();
        let mut buf = Vec::new();
        diagram.write_csv(&f, &mut buf).unwrap();
        let back = read_diagram_csv(&buf[..]).unwrap();
        assert_eq!(back.len(), diagram.bars.len());
        for (simple, bar) in back.iter().zip(&diagram.bars) {
            assert_eq!(simple.dim, bar.dim);
            assert_eq!(simple.birth, bar.birth);
            assert_eq!(simple.death, bar.death);
        }
    }
}
