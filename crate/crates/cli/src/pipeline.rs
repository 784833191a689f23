//! End-to-end experiment pipeline: sample, metric, filtration, reduction,
//! localization, artifact bundle.

use std::fs;
use std::io::Write;
use std::path::Path;

use srips_core::{
    azimuthal_context, build_filtration, build_geodesic_metric, exact_circle_metric,
    exact_cylinder_metric, localize_bar, poisson_thin, reduce_with_metric, sample_cut_sphere,
    sample_cylinder, verify_loop, Bar, Error, FiniteMetric, Filtration, LocalizedLoop,
    PersistenceDiagram, PointCloud, Result, WindingContext,
};

use crate::config::{ExperimentConfig, SamplerConfig};
use crate::plot;

/// Everything an experiment produces, kept in memory so callers can
/// inspect it or write it out as a bundle.
pub struct ExperimentOutcome {
    pub config: ExperimentConfig,
    /// Embedded samplers only; exact models have no ambient coordinates.
    pub cloud: Option<PointCloud>,
    pub metric: FiniteMetric,
    /// Winding chart, when the space has one.
    pub ctx: Option<WindingContext>,
    pub filtration: Filtration,
    pub diagram: PersistenceDiagram,
    /// Localization of the most prominent localizable bar, if any.
    pub localized: Option<LocalizedLoop>,
    /// verify_loop outcome when both a localization and a chart exist.
    pub verified: Option<bool>,
}

/// Build the space of a config: cloud (if embedded), metric, chart.
pub fn build_space(
    config: &ExperimentConfig,
) -> Result<(Option<PointCloud>, FiniteMetric, Option<WindingContext>)> {
    match config.sampler {
        SamplerConfig::CutSphere { count, height } => {
            let raw = sample_cut_sphere(count, height, config.seed)?;
            let thin = config.thin_min_dist.ok_or_else(|| {
                Error::InvalidParams("cut_sphere sampler needs thin_min_dist".into())
            })?;
            let link = config.link_radius.ok_or_else(|| {
                Error::InvalidParams("cut_sphere sampler needs link_radius".into())
            })?;
            let cloud = poisson_thin(&raw, thin)?;
            let metric = build_geodesic_metric(&cloud, link)?;
            let ctx = azimuthal_context(&cloud, height)?;
            Ok((Some(cloud), metric, Some(ctx)))
        }
        SamplerConfig::Circle { count, circumference } => {
            let angles: Vec<f64> = (0..count)
                .map(|i| circumference * i as f64 / count as f64)
                .collect();
            let (metric, ctx) = exact_circle_metric(&angles, circumference)?;
            Ok((None, metric, Some(ctx)))
        }
        SamplerConfig::Cylinder { count, circumference, width } => {
            let samples = sample_cylinder(count, circumference, width, config.seed)?;
            let (metric, ctx) = exact_cylinder_metric(&samples, circumference, width)?;
            Ok((None, metric, Some(ctx)))
        }
    }
}

/// The bar the bundle localizes: longest lifespan among finite dim-1 and
/// all dim-2 bars, dim 2 winning ties.
pub fn bar_to_localize(diagram: &PersistenceDiagram) -> Option<&Bar> {
    diagram
        .bars
        .iter()
        .filter(|b| (b.dim == 1 && !b.is_infinite()) || b.dim == 2)
        .max_by(|a, b| a.lifespan().total_cmp(&b.lifespan()).then(a.dim.cmp(&b.dim)))
}

pub fn run_pipeline(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    let t0 = std::time::Instant::now();
    let (cloud, metric, ctx) = build_space(config)?;
    let t1 = std::time::Instant::now();
    let params = config.params.to_params()?;
    let filtration = build_filtration(&metric, &params)?;
    let t2 = std::time::Instant::now();
    let diagram = reduce_with_metric(&filtration, &metric, config.params.p)?;
    eprintln!(
        "timings: space {:.1}s, filtration {:.1}s, reduction {:.1}s",
        t1.duration_since(t0).as_secs_f64(),
        t2.duration_since(t1).as_secs_f64(),
        t2.elapsed().as_secs_f64()
    );
    let localized = match bar_to_localize(&diagram) {
        Some(bar) => Some(localize_bar(bar, &filtration, &metric)?),
        None => None,
    };
    let verified = match (&localized, &ctx) {
        (Some(found), Some(ctx)) => Some(verify_loop(ctx, found)?),
        _ => None,
    };
    Ok(ExperimentOutcome {
        config: config.clone(),
        cloud,
        metric,
        ctx,
        filtration,
        diagram,
        localized,
        verified,
    })
}

/// JSON summary of a localization; hand-rolled to keep the schema flat.
pub fn localization_json(outcome: &ExperimentOutcome) -> Option<String> {
    let found = outcome.localized.as_ref()?;
    let death = match found.bar_death {
        Some(d) => d.to_string(),
        None => "null".into(),
    };
    let verified = match outcome.verified {
        Some(v) => v.to_string(),
        None => "null".into(),
    };
    Some(format!(
        "{{\n  \"triple\": [{}, {}, {}],\n  \"total_length\": {},\n  \"bar\": {{\"dim\": {}, \"birth\": {}, \"death\": {}}},\n  \"verified\": {}\n}}\n",
        found.triple[0],
        found.triple[1],
        found.triple[2],
        found.total_length,
        found.bar_dim.unwrap_or(0),
        found.bar_birth.unwrap_or(0.0),
        death,
        verified,
    ))
}

/// CSV of the localized loop's concatenated path: point ids plus ambient
/// coordinates when a cloud exists.
pub fn localization_path_csv(outcome: &ExperimentOutcome) -> Option<String> {
    let found = outcome.localized.as_ref()?;
    let mut out = String::from(match outcome.cloud {
        Some(_) => "leg,point,x,y,z\n",
        None => "leg,point\n",
    });
    for (leg, path) in found.paths.iter().enumerate() {
        for &p in path {
            match &outcome.cloud {
                Some(cloud) => {
                    let q = cloud.points[p];
                    out.push_str(&format!("{leg},{p},{},{},{}\n", q[0], q[1], q[2]));
                }
                None => out.push_str(&format!("{leg},{p}\n")),
            }
        }
    }
    Some(out)
}

pub fn filtration_stats(outcome: &ExperimentOutcome) -> String {
    let counts = outcome.filtration.count_by_dim();
    let mut out = format!("points {}\n", outcome.metric.len());
    for (d, c) in counts.iter().enumerate() {
        out.push_str(&format!("dim{d} {c}\n"));
    }
    out.push_str(&format!("total {}\n", outcome.filtration.len()));
    out
}

/// Write the full artifact bundle into a directory.
pub fn write_bundle(outcome: &ExperimentOutcome, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("config.toml"), outcome.config.to_toml()?)?;
    if let Some(cloud) = &outcome.cloud {
        let mut f = fs::File::create(dir.join("cloud.csv"))?;
        srips_core::io::write_cloud(cloud, &mut f)?;
    }
    {
        let mut f = fs::File::create(dir.join("metric.txt"))?;
        srips_core::io::write_metric(&outcome.metric, &mut f)?;
    }
    fs::write(dir.join("filtration_stats.txt"), filtration_stats(outcome))?;
    {
        let mut f = fs::File::create(dir.join("diagram.csv"))?;
        outcome.diagram.write_csv(&outcome.filtration, &mut f)?;
    }
    fs::write(
        dir.join("diagram.svg"),
        plot::diagram_svg(&outcome.diagram, outcome.config.params.r_max),
    )?;
    if let Some(json) = localization_json(outcome) {
        fs::write(dir.join("localization.json"), json)?;
    }
    if let Some(csv) = localization_path_csv(outcome) {
        fs::write(dir.join("loop_path.csv"), csv)?;
    }
    let mut f = fs::File::create(dir.join("summary.txt"))?;
    write_summary(outcome, &mut f)?;
    Ok(())
}

pub fn write_summary<W: Write>(outcome: &ExperimentOutcome, out: &mut W) -> Result<()> {
    writeln!(out, "experiment {} seed {}", outcome.config.name, outcome.config.seed)?;
    writeln!(out, "points {}", outcome.metric.len())?;
    for d in 0..=2usize {
        let bars = outcome.diagram.bars_in_window(d, (0.0, f64::INFINITY), 0.0);
        writeln!(out, "dim{} bars {}", d, bars.len())?;
        for bar in bars.iter().take(5) {
            let death = bar
                .death
                .map(|v| format!("{v:.4}"))
                .unwrap_or_else(|| "inf".into());
            writeln!(
                out,
                "  [{:.4}, {}) lifespan {:.4}",
                bar.birth,
                death,
                bar.lifespan()
            )?;
        }
    }
    if let Some(found) = &outcome.localized {
        writeln!(
            out,
            "localized triple {:?} length {:.4} verified {:?}",
            found.triple, found.total_length, outcome.verified
        )?;
    }
    Ok(())
}
