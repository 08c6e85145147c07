//! CSV ingestion and export. Numeric matrices with a header row; labeled
//! datasets additionally carry a final column named "label" with values
//! 1 or 2. Parse errors cite the physical 1-based row (header included)
//! and column of the offending cell.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sparsecov::lda::LabeledDataset;
use sparsecov::matrix::DataMatrix;

use crate::error::CliError;

/// All floats in reports are serialized with 17 significant digits, enough
/// to round-trip f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Either a plain numeric matrix or a labeled dataset, depending on the
/// header.
#[derive(Debug)]
pub enum IngestedCsv {
    Matrix {
        data: DataMatrix,
        column_names: Vec<String>,
    },
    Labeled(LabeledDataset),
}

pub fn ingest_csv(path: &Path) -> Result<IngestedCsv, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::Data(format!("{}: empty file", path.display())))?;
    let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    if names.is_empty() || names.iter().any(|n| n.is_empty()) {
        return Err(CliError::Data(format!(
            "{}: malformed header row",
            path.display()
        )));
    }
    let labeled = names.last().map(String::as_str) == Some("label");
    let n_value_cols = if labeled { names.len() - 1 } else { names.len() };
    if n_value_cols == 0 {
        return Err(CliError::Data(format!(
            "{}: no feature columns",
            path.display()
        )));
    }

    let mut values: Vec<f64> = Vec::new();
    let mut labels: Vec<u8> = Vec::new();
    let mut n_rows = 0usize;
    for (line_idx, line) in lines {
        let row_no = line_idx + 1; // 1-based physical line
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != names.len() {
            return Err(CliError::Data(format!(
                "{}: row {row_no} has {} cells, expected {}",
                path.display(),
                cells.len(),
                names.len()
            )));
        }
        for (c, cell) in cells.iter().take(n_value_cols).enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                CliError::Data(format!(
                    "{}: non-numeric cell at row {row_no}, column {}",
                    path.display(),
                    c + 1
                ))
            })?;
            if !v.is_finite() {
                return Err(CliError::Data(format!(
                    "{}: non-finite value at row {row_no}, column {}",
                    path.display(),
                    c + 1
                )));
            }
            values.push(v);
        }
        if labeled {
            let cell = cells[names.len() - 1];
            let label: f64 = cell.parse().map_err(|_| {
                CliError::Data(format!(
                    "{}: non-numeric label at row {row_no}, column {}",
                    path.display(),
                    names.len()
                ))
            })?;
            if label != 1.0 && label != 2.0 {
                return Err(CliError::Data(format!(
                    "{}: label must be 1 or 2, found {cell} at row {row_no}",
                    path.display()
                )));
            }
            labels.push(label as u8);
        }
        n_rows += 1;
    }
    if n_rows == 0 {
        return Err(CliError::Data(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    let data = DataMatrix::new(n_rows, n_value_cols, values)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    if labeled {
        let feature_names = names[..n_value_cols].to_vec();
        let ds = LabeledDataset::new(data, labels, Some(feature_names))
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        Ok(IngestedCsv::Labeled(ds))
    } else {
        Ok(IngestedCsv::Matrix {
            data,
            column_names: names,
        })
    }
}

/// Serialize a matrix with the given header names.
pub fn matrix_to_csv(data: &DataMatrix, column_names: &[String]) -> String {
    let mut out = String::new();
    out.push_str(&column_names.join(","));
    out.push('\n');
    for i in 0..data.n_rows() {
        let row: Vec<String> = data.row(i).iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Serialize a labeled dataset in the ingestible format: feature columns
/// followed by a final "label" column.
pub fn labeled_to_csv(ds: &LabeledDataset) -> String {
    let n = ds.n_samples();
    let p = ds.n_features();
    let mut wide = DataMatrix::zeros(n, p + 1);
    for i in 0..n {
        for j in 0..p {
            wide.set(i, j, ds.x.get(i, j));
        }
        wide.set(i, p, ds.labels[i] as f64);
    }
    let mut names: Vec<String> = match &ds.feature_names {
        Some(names) => names.clone(),
        None => (1..=p).map(|j| format!("f{j}")).collect(),
    };
    names.push("label".to_string());
    matrix_to_csv(&wide, &names)
}

/// Serialize a symmetric matrix as a dense CSV with generated column names.
pub fn symmetric_to_csv(m: &sparsecov::matrix::SymmetricMatrix) -> String {
    let p = m.dim();
    let names: Vec<String> = (1..=p).map(|j| format!("v{j}")).collect();
    let mut out = String::new();
    out.push_str(&names.join(","));
    out.push('\n');
    for i in 0..p {
        let mut line = String::new();
        for j in 0..p {
            if j > 0 {
                line.push(',');
            }
            let _ = write!(line, "{}", fmt_f64(m.get(i, j)));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn roundtrip_matrix_values() {
        let f = write_temp("x1,x2\n1.5,2.25\n-0.125,1e-3\n0.1,3.0\n");
        let IngestedCsv::Matrix { data, column_names } = ingest_csv(f.path()).unwrap()
        else {
            panic!("expected matrix");
        };
        assert_eq!(data.n_rows(), 3);
        let text = matrix_to_csv(&data, &column_names);
        let f2 = write_temp(&text);
        let IngestedCsv::Matrix { data: data2, .. } = ingest_csv(f2.path()).unwrap() else {
            panic!("expected matrix");
        };
        assert_eq!(data, data2);
    }

    #[test]
    fn non_numeric_cell_cites_row_and_column() {
        // The bad cell sits on physical line 5 (header is line 1), column 3.
        let f = write_temp("a,b,c\n1,2,3\n4,5,6\n7,8,9\n1,2,oops\n");
        let err = ingest_csv(f.path()).unwrap_err().to_string();
        assert!(err.contains("row 5, column 3"), "{err}");
    }

    #[test]
    fn label_out_of_domain_is_rejected() {
        let f = write_temp("g1,g2,label\n0.5,1.0,1\n0.25,2.0,3\n");
        let err = ingest_csv(f.path()).unwrap_err().to_string();
        assert!(err.contains("label must be 1 or 2"), "{err}");
    }

    #[test]
    fn labeled_dataset_parses() {
        let f = write_temp("g1,g2,label\n0.5,1.0,1\n0.25,2.0,2\n1.5,0.0,1\n");
        let IngestedCsv::Labeled(ds) = ingest_csv(f.path()).unwrap() else {
            panic!("expected labeled dataset");
        };
        assert_eq!(ds.labels, vec![1, 2, 1]);
        assert_eq!(ds.n_features(), 2);
        assert_eq!(
            ds.feature_names.as_deref(),
            Some(&["g1".to_string(), "g2".to_string()][..])
        );
    }

    #[test]
    fn ragged_and_empty_inputs_error() {
        let f = write_temp("a,b\n1,2,3\n");
        assert!(ingest_csv(f.path()).is_err());
        let f = write_temp("");
        assert!(ingest_csv(f.path()).is_err());
        let f = write_temp("a,b\n1,inf\n");
        let err = ingest_csv(f.path()).unwrap_err().to_string();
        assert!(err.contains("non-finite"), "{err}");
    }

    #[test]
    fn fmt_f64_roundtrips_exactly() {
        for &x in &[
            0.1,
            -3.75e-12,
            123456.789,
            f64::MIN_POSITIVE,
            2.0f64.powi(-52),
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }
}
