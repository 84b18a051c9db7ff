//! State files and number formatting.
//!
//! A state file is JSON: `{"dims": [dA, dB], "matrix": [[re, im], ...]}` with
//! the matrix entries in row-major order. Every float written by this crate
//! carries 17 significant digits, so doubles survive a round trip exactly.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::config::Tolerances;
use crate::density::{validate_density, DensityMatrix};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// `x` with 17 significant digits in scientific notation.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Serialize, Deserialize)]
struct StateFile {
    dims: [usize; 2],
    matrix: Vec<[f64; 2]>,
}

/// Parses and validates a state document.
pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(text)
        .map_err(|e| Error::StateFile(format!("malformed state file: {e}")))?;
    let [dim_a, dim_b] = file.dims;
    let n = dim_a * dim_b;
    if n == 0 || file.matrix.len() != n * n {
        return Err(Error::StateFile(format!(
            "dims {dim_a}x{dim_b} need {} entries, found {}",
            n * n,
            file.matrix.len()
        )));
    }
    let data = file
        .matrix
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    let m = ComplexMatrix::new(n, n, data)?;
    validate_density(m, (dim_a, dim_b), Tolerances::DEFAULT.validation)
}

pub fn read_state(path: &Path) -> Result<DensityMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::StateFile(format!("cannot read {}: {e}", path.display())))?;
    parse_state(&text)
}

/// Serializes a state in the state-file format.
pub fn state_to_json(rho: &DensityMatrix) -> String {
    let (dim_a, dim_b) = rho.dims();
    let file = StateFile {
        dims: [dim_a, dim_b],
        matrix: rho
            .matrix()
            .as_slice()
            .iter()
            .map(|z| [z.re, z.im])
            .collect(),
    };
    to_json_string(&file)
}

pub fn write_state(path: &Path, rho: &DensityMatrix) -> io::Result<()> {
    fs::write(path, state_to_json(rho) + "\n")
}

/// Pretty JSON whose floats are printed by [`format_f64`].
pub struct ExactFloatFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl Default for ExactFloatFormatter<'_> {
    fn default() -> Self {
        Self {
            inner: PrettyFormatter::new(),
        }
    }
}

impl Formatter for ExactFloatFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_f64(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Pretty-printed JSON with 17-digit floats.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloatFormatter::default());
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::rho_t;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(format_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn state_round_trip_is_exact() {
        let rho = rho_t(-0.3141592653589793).unwrap();
        let back = parse_state(&state_to_json(&rho)).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn bad_documents() {
        assert!(matches!(parse_state("{"), Err(Error::StateFile(_))));
        assert!(matches!(
            parse_state(r#"{"dims":[2,2],"matrix":[[1,0]]}"#),
            Err(Error::StateFile(_))
        ));
        let not_psd = r#"{"dims":[1,2],"matrix":[[2,0],[0,0],[0,0],[-1,0]]}"#;
        assert!(matches!(
            parse_state(not_psd),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn json_floats_are_exact() {
        let s = to_json_string(&[1.0f64 / 3.0]);
        let v: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(v[0], 1.0 / 3.0);
        assert!(s.contains("3.3333333333333331e-1"));
    }
}
