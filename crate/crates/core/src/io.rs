//! Dataset ingestion (IDX, labelled CSV) and feature CSV output.
//!
//! IDX files are the MNIST container: a big-endian `u32` magic, one
//! big-endian `u32` size per dimension, then raw `u8` data. Gzip-compressed
//! files are detected by their header and decompressed on the fly.
//!
//! Image CSV lines hold an optional leading label followed by
//! `rows · cols · channels` intensities. Multi-channel pixels are
//! channel-major: all of channel 0 in row-major order, then channel 1, ...

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;

use crate::dataset::{Dataset, FeatureMatrix};
use crate::error::{format, invalid, Error, Result};
use crate::image::GrayImage;

pub const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
pub const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

fn open_maybe_gz(path: &Path) -> Result<Box<dyn Read>> {
    let mut reader = BufReader::new(File::open(path)?);
    let gz = reader.fill_buf()?.starts_with(&[0x1f, 0x8b]);
    Ok(if gz {
        Box::new(GzDecoder::new(reader))
    } else {
        Box::new(reader)
    })
}

fn read_u32_be(r: &mut impl Read) -> io::Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_be_bytes(buf))
}

fn expect_magic(r: &mut impl Read, expected: u32, path: &Path) -> Result<()> {
    let magic = read_u32_be(r)?;
    if magic != expected {
        return format(format!(
            "{}: bad IDX magic {magic:#010x}, expected {expected:#010x}",
            path.display()
        ));
    }
    Ok(())
}

fn expect_eof(r: &mut impl Read, path: &Path) -> Result<()> {
    let mut probe = [0u8; 1];
    if r.read(&mut probe)? != 0 {
        return format(format!(
            "{}: trailing bytes after IDX payload",
            path.display()
        ));
    }
    Ok(())
}

/// Reads an IDX image file and, optionally, its matching label file.
pub fn load_idx(image_path: impl AsRef<Path>, label_path: Option<&Path>) -> Result<Dataset> {
    let image_path = image_path.as_ref();
    let mut r = open_maybe_gz(image_path)?;
    expect_magic(&mut r, IDX_IMAGES_MAGIC, image_path)?;
    let n = read_u32_be(&mut r)? as usize;
    let rows = read_u32_be(&mut r)? as usize;
    let cols = read_u32_be(&mut r)? as usize;
    if rows == 0 || cols == 0 {
        return format(format!(
            "{}: image dimensions must be positive, got {rows}x{cols}",
            image_path.display()
        ));
    }
    let plane = rows * cols;
    let mut images = Vec::with_capacity(n);
    for _ in 0..n {
        let mut px = vec![0u8; plane];
        r.read_exact(&mut px)?;
        images.push(GrayImage::new(rows, cols, 1, px)?);
    }
    expect_eof(&mut r, image_path)?;

    let labels = match label_path {
        None => None,
        Some(p) => {
            let mut r = open_maybe_gz(p)?;
            expect_magic(&mut r, IDX_LABELS_MAGIC, p)?;
            let count = read_u32_be(&mut r)? as usize;
            if count != n {
                return format(format!("{}: {count} labels for {n} images", p.display()));
            }
            let mut raw = vec![0u8; count];
            r.read_exact(&mut raw)?;
            expect_eof(&mut r, p)?;
            Some(raw.into_iter().map(u32::from).collect())
        }
    };
    Dataset::new(images, labels)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            _ => unreachable!(),
        }
    } else {
        Error::Format(format!("{}: {e}", path.display()))
    }
}

/// Reads one image per CSV line.
pub fn load_csv(
    path: impl AsRef<Path>,
    has_label: bool,
    rows: usize,
    cols: usize,
    channels: usize,
) -> Result<Dataset> {
    let path = path.as_ref();
    if rows == 0 || cols == 0 || channels == 0 {
        return invalid(format!(
            "image geometry must be positive, got {rows}x{cols}x{channels}"
        ));
    }
    let n_pixels = rows * cols * channels;
    let expected = n_pixels + usize::from(has_label);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;

    let mut images = Vec::new();
    let mut labels = Vec::new();
    let mut record = csv::StringRecord::new();
    let mut planes = Vec::with_capacity(n_pixels);
    while reader
        .read_record(&mut record)
        .map_err(|e| csv_error(path, e))?
    {
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != expected {
            return format(format!(
                "{} line {line}: expected {expected} fields, found {}",
                path.display(),
                record.len()
            ));
        }
        let mut fields = record.iter().map(str::trim);
        if has_label {
            let raw = fields.next().unwrap_or_default();
            let label = raw.parse::<u32>().map_err(|_| {
                Error::Format(format!(
                    "{} line {line}: label {raw:?} is not a non-negative integer",
                    path.display()
                ))
            })?;
            labels.push(label);
        }
        planes.clear();
        for raw in fields {
            let v = raw.parse::<i64>().map_err(|_| {
                Error::Format(format!(
                    "{} line {line}: pixel {raw:?} is not an integer",
                    path.display()
                ))
            })?;
            let px = u8::try_from(v).map_err(|_| {
                Error::Format(format!(
                    "{} line {line}: intensity {v} outside 0..=255",
                    path.display()
                ))
            })?;
            planes.push(px);
        }
        images.push(GrayImage::from_planar(rows, cols, channels, &planes)?);
    }
    Dataset::new(images, has_label.then_some(labels))
}

/// Writes `label,f0,f1,...` (or `f0,...` when unlabelled), one line per row.
pub fn write_features(matrix: &FeatureMatrix, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path.as_ref())?;
    let mut out = BufWriter::new(file);
    write_features_to(matrix, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn write_features_to<W: Write>(matrix: &FeatureMatrix, out: &mut W) -> Result<()> {
    let labels = matrix.labels();
    let mut header: Vec<String> = Vec::with_capacity(matrix.n_cols() + 1);
    if labels.is_some() {
        header.push("label".into());
    }
    header.extend((0..matrix.n_cols()).map(|i| format!("f{i}")));
    writeln!(out, "{}", header.join(","))?;
    let mut line = String::new();
    for (i, row) in matrix.rows().enumerate() {
        line.clear();
        if let Some(l) = labels {
            line.push_str(&l[i].to_string());
            if !row.is_empty() {
                line.push(',');
            }
        }
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&v.to_string());
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Reads a file produced by [`write_features`]. Layout metadata is not
/// stored in the CSV and comes back as `None`.
pub fn read_features(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let labelled = header.get(0) == Some("label");
    let n_cols = header.len() - usize::from(labelled);
    for (j, name) in header.iter().skip(usize::from(labelled)).enumerate() {
        if name != format!("f{j}") {
            return format(format!(
                "{}: unexpected header column {name:?} at position {j}",
                path.display()
            ));
        }
    }
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut n_rows = 0;
    for rec in reader.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != header.len() {
            return format(format!(
                "{} line {line}: expected {} fields, found {}",
                path.display(),
                header.len(),
                rec.len()
            ));
        }
        for (j, raw) in rec.iter().enumerate() {
            let v = raw.parse::<u32>().map_err(|_| {
                Error::Format(format!(
                    "{} line {line}: {raw:?} is not a non-negative integer",
                    path.display()
                ))
            })?;
            if labelled && j == 0 {
                labels.push(v);
            } else {
                values.push(v);
            }
        }
        n_rows += 1;
    }
    FeatureMatrix::new(n_rows, n_cols, values, labelled.then_some(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(m: &FeatureMatrix) -> String {
        let mut buf = Vec::new();
        write_features_to(m, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn feature_csv_bodies() {
        let m = FeatureMatrix::new(1, 3, vec![5, 4, 0], Some(vec![2])).unwrap();
        assert_eq!(render(&m), "label,f0,f1,f2\n2,5,4,0\n");
        let m = FeatureMatrix::new(1, 2, vec![0, 0], None).unwrap();
        assert_eq!(render(&m), "f0,f1\n0,0\n");
    }
}
