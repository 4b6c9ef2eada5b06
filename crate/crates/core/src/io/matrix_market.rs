//! Matrix Market text files: `coordinate` and `array` layouts with `real`,
//! `integer`, `complex` or `pattern` fields and any of the four symmetry
//! kinds. Storage is always dense.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use super::IoError;
use crate::linalg::{CMatrix, CVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Complex,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    Skew,
    Hermitian,
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        message: message.into(),
    }
}

fn header(line: &str) -> Result<(Layout, Field, Symmetry), IoError> {
    let words: Vec<String> = line
        .split_whitespace()
        .map(|w| w.to_ascii_lowercase())
        .collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(parse_err(
            1,
            "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'",
        ));
    }
    let layout = match words[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        w => return Err(parse_err(1, format!("unknown layout '{w}'"))),
    };
    let field = match words[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        "pattern" => Field::Pattern,
        w => return Err(parse_err(1, format!("unknown field '{w}'"))),
    };
    let symmetry = match words[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::Skew,
        "hermitian" => Symmetry::Hermitian,
        w => return Err(parse_err(1, format!("unknown symmetry '{w}'"))),
    };
    if field == Field::Pattern && layout == Layout::Array {
        return Err(parse_err(1, "pattern field needs the coordinate layout"));
    }
    if symmetry == Symmetry::Hermitian && field != Field::Complex {
        return Err(parse_err(1, "hermitian symmetry needs the complex field"));
    }
    Ok((layout, field, symmetry))
}

fn number<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, IoError> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("cannot read {what} from '{tok}'")))
}

fn value(toks: &[&str], field: Field, line: usize) -> Result<Complex64, IoError> {
    let want = match field {
        Field::Pattern => 0,
        Field::Real | Field::Integer => 1,
        Field::Complex => 2,
    };
    if toks.len() != want {
        return Err(parse_err(
            line,
            format!("expected {want} value token(s), found {}", toks.len()),
        ));
    }
    Ok(match field {
        Field::Pattern => Complex64::new(1.0, 0.0),
        Field::Integer => Complex64::new(number::<i64>(toks[0], line, "an integer")? as f64, 0.0),
        Field::Real => Complex64::new(number(toks[0], line, "a real")?, 0.0),
        Field::Complex => Complex64::new(
            number(toks[0], line, "a real part")?,
            number(toks[1], line, "an imaginary part")?,
        ),
    })
}

/// Writes `(i, j)` and its mirror image.
fn place(
    a: &mut CMatrix,
    i: usize,
    j: usize,
    v: Complex64,
    symmetry: Symmetry,
    line: usize,
) -> Result<(), IoError> {
    if symmetry != Symmetry::General && i < j {
        return Err(parse_err(
            line,
            format!(
                "entry ({}, {}) lies above the diagonal of a symmetric file",
                i + 1,
                j + 1
            ),
        ));
    }
    if i == j && symmetry == Symmetry::Skew {
        return Err(parse_err(
            line,
            "skew-symmetric files cannot store diagonal entries",
        ));
    }
    if i == j && symmetry == Symmetry::Hermitian && v.im != 0.0 {
        return Err(parse_err(line, "hermitian diagonal entries must be real"));
    }
    a[(i, j)] = v;
    if i != j {
        match symmetry {
            Symmetry::General => {}
            Symmetry::Symmetric => a[(j, i)] = v,
            Symmetry::Skew => a[(j, i)] = -v,
            Symmetry::Hermitian => a[(j, i)] = v.conj(),
        }
    }
    Ok(())
}

/// Parses Matrix Market text. Errors carry 1-based line numbers.
pub fn parse_matrix(text: &str) -> Result<CMatrix, IoError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let (layout, field, symmetry) = header(first)?;
    let mut data = lines.filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('%'));

    let (size_line, size) = data
        .next()
        .ok_or_else(|| parse_err(1, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    let expected = if layout == Layout::Coordinate { 3 } else { 2 };
    if dims.len() != expected {
        return Err(parse_err(
            size_line,
            format!("size line needs {expected} integers"),
        ));
    }
    let rows: usize = number(dims[0], size_line, "the row count")?;
    let cols: usize = number(dims[1], size_line, "the column count")?;
    if rows == 0 || cols == 0 {
        return Err(parse_err(size_line, "matrix dimensions must be positive"));
    }
    if symmetry != Symmetry::General && rows != cols {
        return Err(parse_err(
            size_line,
            "symmetric storage needs a square matrix",
        ));
    }
    let mut a = CMatrix::zeros(rows, cols);

    match layout {
        Layout::Coordinate => {
            let nnz: usize = number(dims[2], size_line, "the entry count")?;
            let mut seen = std::collections::HashMap::with_capacity(nnz);
            let mut count = 0;
            for (line, text) in data {
                let toks: Vec<&str> = text.split_whitespace().collect();
                if toks.len() < 2 {
                    return Err(parse_err(line, "entry needs a row and a column index"));
                }
                let i: usize = number(toks[0], line, "a row index")?;
                let j: usize = number(toks[1], line, "a column index")?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(parse_err(
                        line,
                        format!("index ({i}, {j}) outside {rows}x{cols}"),
                    ));
                }
                if let Some(first) = seen.insert((i, j), line) {
                    return Err(parse_err(
                        line,
                        format!("duplicate entry ({i}, {j}), first given on line {first}"),
                    ));
                }
                let v = value(&toks[2..], field, line)?;
                place(&mut a, i - 1, j - 1, v, symmetry, line)?;
                count += 1;
                if count > nnz {
                    return Err(parse_err(
                        line,
                        format!("more than the declared {nnz} entries"),
                    ));
                }
            }
            if count != nnz {
                return Err(parse_err(
                    size_line,
                    format!("declared {nnz} entries, found {count}"),
                ));
            }
        }
        Layout::Array => {
            // column-major; symmetric kinds list the lower triangle only
            let slots: Vec<(usize, usize)> = (0..cols)
                .flat_map(|j| (0..rows).map(move |i| (i, j)))
                .filter(|&(i, j)| match symmetry {
                    Symmetry::General => true,
                    Symmetry::Skew => i > j,
                    Symmetry::Symmetric | Symmetry::Hermitian => i >= j,
                })
                .collect();
            let mut next = slots.iter();
            let mut last_line = size_line;
            for (line, text) in data {
                last_line = line;
                let toks: Vec<&str> = text.split_whitespace().collect();
                let &(i, j) = next
                    .next()
                    .ok_or_else(|| parse_err(line, "more entries than the matrix holds"))?;
                place(&mut a, i, j, value(&toks, field, line)?, symmetry, line)?;
            }
            let missing = next.count();
            if missing > 0 {
                return Err(parse_err(
                    last_line,
                    format!("{missing} array entries missing"),
                ));
            }
        }
    }
    Ok(a)
}

pub fn load_matrix(path: &Path) -> Result<CMatrix, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_matrix(&text).map_err(|e| e.in_file(path))
}

/// A vector stored as an `n x 1` (or `1 x n`) matrix.
pub fn load_vector(path: &Path) -> Result<CVector, IoError> {
    let a = load_matrix(path)?;
    if a.ncols() != 1 && a.nrows() != 1 {
        return Err(IoError::Shape(format!(
            "{} holds a {}x{} matrix, not a vector",
            path.display(),
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(CVector::from_iterator(a.len(), a.iter().copied()))
}

/// Dense `array general` text; the field is `real` when every entry is real.
/// Values use the shortest representation that reads back exactly.
pub fn format_matrix(a: &CMatrix) -> String {
    let complex = a.iter().any(|z| z.im != 0.0);
    let mut out = format!(
        "%%MatrixMarket matrix array {} general\n",
        if complex { "complex" } else { "real" }
    );
    let _ = writeln!(out, "{} {}", a.nrows(), a.ncols());
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let z = a[(i, j)];
            let _ = if complex {
                writeln!(out, "{:e} {:e}", z.re, z.im)
            } else {
                writeln!(out, "{:e}", z.re)
            };
        }
    }
    out
}

pub fn save_matrix(path: &Path, a: &CMatrix) -> Result<(), IoError> {
    fs::write(path, format_matrix(a)).map_err(|source| IoError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save_vector(path: &Path, v: &CVector) -> Result<(), IoError> {
    save_matrix(path, &CMatrix::from_column_slice(v.len(), 1, v.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(e: IoError) -> usize {
        match e {
            IoError::Parse { line, .. } => line,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coordinate_identity() {
        let a = parse_matrix(
            "%%MatrixMarket matrix coordinate real general\n% c\n2 2 2\n1 1 1.0\n2 2 1\n",
        )
        .unwrap();
        assert_eq!(a, CMatrix::identity(2, 2));
    }

    #[test]
    fn duplicate_entry_names_line() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n1 1 2.0\n";
        assert_eq!(line_of(parse_matrix(text).unwrap_err()), 4);
    }

    #[test]
    fn symmetric_kinds_mirror() {
        let s =
            parse_matrix("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 3\n2 1 4\n")
                .unwrap();
        assert_eq!(s[(0, 1)], Complex64::new(4.0, 0.0));
        let k = parse_matrix("%%MatrixMarket matrix array real skew-symmetric\n2 2\n5\n").unwrap();
        assert_eq!((k[(1, 0)].re, k[(0, 1)].re), (5.0, -5.0));
        let h =
            parse_matrix("%%MatrixMarket matrix coordinate complex hermitian\n2 2 1\n2 1 1 2\n")
                .unwrap();
        assert_eq!(h[(0, 1)], Complex64::new(1.0, -2.0));
        let p =
            parse_matrix("%%MatrixMarket matrix coordinate pattern general\n2 3 1\n2 3\n").unwrap();
        assert_eq!(p[(1, 2)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn array_is_column_major() {
        let a =
            parse_matrix("%%MatrixMarket matrix array integer general\n2 2\n1\n2\n3\n4\n").unwrap();
        assert_eq!(a[(1, 0)].re, 2.0);
        assert_eq!(a[(0, 1)].re, 3.0);
    }

    #[test]
    fn malformed_inputs_report_lines() {
        assert_eq!(
            line_of(parse_matrix("%%MatrixMarket vector coordinate real general\n").unwrap_err()),
            1
        );
        let oob = "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n";
        assert_eq!(line_of(parse_matrix(oob).unwrap_err()), 3);
        let mismatch = "%%MatrixMarket matrix coordinate complex general\n2 2 1\n1 1 1.0\n";
        assert_eq!(line_of(parse_matrix(mismatch).unwrap_err()), 3);
        let upper = "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1.0\n";
        assert_eq!(line_of(parse_matrix(upper).unwrap_err()), 3);
        let short = "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n";
        assert_eq!(line_of(parse_matrix(short).unwrap_err()), 5);
        let count = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n";
        assert_eq!(line_of(parse_matrix(count).unwrap_err()), 2);
    }

    #[test]
    fn round_trip_is_exact() {
        let a = CMatrix::from_fn(3, 2, |i, j| {
            Complex64::new(1.0 / (i + 2 * j + 3) as f64, (i as f64 - 0.7) / 3.0)
        });
        let back = parse_matrix(&format_matrix(&a)).unwrap();
        assert_eq!(a, back);
        let r = CMatrix::from_fn(2, 2, |i, j| {
            Complex64::new(std::f64::consts::PI * (i + j) as f64, 0.0)
        });
        assert!(format_matrix(&r).contains("array real"));
        assert_eq!(parse_matrix(&format_matrix(&r)).unwrap(), r);
    }
}
