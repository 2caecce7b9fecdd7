//! Instance files (TOML) and sample files (CSV).

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use super::instance::{ProblemInstance, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::geometry::{ClassId, PointSet};

pub fn instance_to_string(instance: &ProblemInstance) -> Result<String> {
    Ok(toml::to_string(instance)?)
}

pub fn instance_from_str(text: &str) -> Result<ProblemInstance> {
    let inst: ProblemInstance = toml::from_str(text)?;
    if inst.schema_version != SCHEMA_VERSION {
        return Err(Error::Format(format!(
            "instance schema version {} is not supported (expected {SCHEMA_VERSION})",
            inst.schema_version
        )));
    }
    if inst.planes.iter().any(|p| p.w.len() != inst.dim) {
        return Err(Error::Format("plane dimension does not match instance dimension".into()));
    }
    if inst.code.code_length() != inst.planes.len() && inst.code.num_classes() > 0 {
        return Err(Error::Format("code length does not match number of planes".into()));
    }
    Ok(inst)
}

pub fn write_instance(path: impl AsRef<Path>, instance: &ProblemInstance) -> Result<()> {
    fs::write(path, instance_to_string(instance)?)?;
    Ok(())
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<ProblemInstance> {
    instance_from_str(&fs::read_to_string(path)?)
}

/// Writes `x0..x{d-1}` columns and, when given, a trailing `label` column.
pub fn write_points_csv<W: Write>(out: W, points: &PointSet, labels: Option<&[ClassId]>) -> Result<()> {
    if let Some(l) = labels {
        if l.len() != points.len() {
            return Err(Error::InvalidInput(format!("{} labels for {} points", l.len(), points.len())));
        }
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (0..points.dim()).map(|k| format!("x{k}")).collect();
    if labels.is_some() {
        header.push("label".into());
    }
    w.write_record(&header)?;
    let mut record = Vec::with_capacity(header.len());
    for (i, x) in points.rows().enumerate() {
        record.clear();
        record.extend(x.iter().map(|v| v.to_string()));
        if let Some(l) = labels {
            record.push(l[i].to_string());
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_points_csv<R: Read>(input: R) -> Result<(PointSet, Option<Vec<ClassId>>)> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    let labeled = header.iter().last() == Some("label");
    let dim = header.len() - usize::from(labeled);
    for (k, name) in header.iter().take(dim).enumerate() {
        if name != format!("x{k}") {
            return Err(Error::Format(format!("unexpected column {name:?} at position {k}")));
        }
    }
    let mut points = PointSet::new(dim);
    let mut labels = labeled.then(Vec::new);
    let mut row = vec![0.0; dim];
    for rec in r.records() {
        let rec = rec?;
        for (k, slot) in row.iter_mut().enumerate() {
            *slot = rec[k]
                .parse()
                .map_err(|_| Error::Format(format!("bad coordinate {:?}", &rec[k])))?;
        }
        points.push(&row)?;
        if let Some(l) = labels.as_mut() {
            l.push(rec[dim].parse().map_err(|_| Error::Format(format!("bad label {:?}", &rec[dim])))?);
        }
    }
    Ok((points, labels))
}

pub fn write_sample(path: impl AsRef<Path>, points: &PointSet, labels: Option<&[ClassId]>) -> Result<()> {
    write_points_csv(fs::File::create(path)?, points, labels)
}

pub fn read_sample(path: impl AsRef<Path>) -> Result<(PointSet, Option<Vec<ClassId>>)> {
    read_points_csv(fs::File::open(path)?)
}
