//! Vectors of thresholded character images, averaged per label.
//!
//! The image directory holds one subdirectory per label; every `.png` or
//! `.pgm` file inside is one sample.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    mean_padded, vector_table, ExperimentConfig, Params, Pipeline, Report, Table, VectorKind, Vectors,
    UNIT_BOX_DIAMETER,
};
use crate::error::{Error, Result};
use crate::pointcloud::{image_to_point_cloud_with, GrayImage, ImageMode, DEFAULT_IMAGE_THRESHOLD};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HandwritingParams {
    pub image_dir: PathBuf,
    pub threshold: u8,
    pub mode: ImageMode,
    pub pipeline: Pipeline,
}

impl Default for HandwritingParams {
    fn default() -> Self {
        Self {
            image_dir: PathBuf::new(),
            threshold: DEFAULT_IMAGE_THRESHOLD,
            mode: ImageMode::Threshold,
            pipeline: Pipeline::new(Some(UNIT_BOX_DIAMETER)),
        }
    }
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut entries = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()).map_err(|e| Error::io(dir, e)))
        .collect::<Result<Vec<_>>>()?;
    entries.sort();
    Ok(entries)
}

fn is_image(path: &Path) -> bool {
    path.is_file()
        && path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("png") || e.eq_ignore_ascii_case("pgm"))
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

/// `(label, image paths)` in sorted order.
pub fn labelled_images(dir: &Path) -> Result<Vec<(String, Vec<PathBuf>)>> {
    let mut labels = Vec::new();
    for sub in sorted_entries(dir)?.into_iter().filter(|p| p.is_dir()) {
        let images: Vec<PathBuf> = sorted_entries(&sub)?.into_iter().filter(|p| is_image(p)).collect();
        if images.is_empty() {
            return Err(Error::invalid(format!("label directory {} has no PNG/PGM images", sub.display())));
        }
        labels.push((file_name(&sub), images));
    }
    if labels.is_empty() {
        return Err(Error::invalid(format!("{} has no label subdirectories", dir.display())));
    }
    Ok(labels)
}

pub fn run_handwriting(seed: u64, params: &HandwritingParams) -> Result<Report> {
    params.pipeline.validate()?;
    let mut report = Report::new(ExperimentConfig { seed, params: Params::Handwriting(params.clone()) });
    let labels = labelled_images(&params.image_dir)?;
    let tasks: Vec<(usize, &PathBuf)> =
        labels.iter().enumerate().flat_map(|(l, (_, paths))| paths.iter().map(move |p| (l, p))).collect();
    let runs: Vec<(usize, Vectors)> = tasks
        .par_iter()
        .map(|&(l, path)| {
            let image = GrayImage::load(path)?;
            let name = format!("{}/{}", labels[l].0, file_name(path));
            let cloud = image_to_point_cloud_with(&image, params.threshold, params.mode, &name)?;
            let diagram = params.pipeline.diagram(&cloud)?;
            Ok((cloud.len(), params.pipeline.vectors(&diagram)?))
        })
        .collect::<Result<_>>()?;

    let mut images = Table::new(
        "handwriting_images",
        &["label", "file", "points", "diagram_points", "persistence_lead", "interconnectivity_lead", "stable_lead"],
    );
    for (&(l, path), (points, v)) in tasks.iter().zip(&runs) {
        let lead = |x: &[f64]| x.first().copied().unwrap_or(0.0).to_string();
        images.push(vec![
            labels[l].0.clone(),
            file_name(path),
            points.to_string(),
            v.persistence.len().to_string(),
            lead(&v.persistence),
            lead(&v.interconnectivity),
            lead(&v.stable),
        ]);
    }

    for kind in VectorKind::ALL {
        let columns: Vec<(String, Vec<f64>)> = labels
            .iter()
            .enumerate()
            .map(|(l, (label, _))| {
                let slices: Vec<&[f64]> =
                    tasks.iter().zip(&runs).filter(|((k, _), _)| *k == l).map(|(_, (_, v))| v.get(kind)).collect();
                (label.clone(), mean_padded(&slices))
            })
            .collect();
        let name = format!("handwriting_{}", kind.as_str());
        let (table, plot) = vector_table(&name, &format!("Average {} vector per label", kind.as_str()), &columns);
        report.tables.push(table);
        report.plots.push(plot);
    }
    report.tables.push(images);
    report.set("labels", labels.len());
    report.set("images", tasks.len());
    Ok(report)
}
