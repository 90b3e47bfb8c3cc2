//! Report rendering: JSON with fixed-width floats, CSV for bulk tables.
//!
//! Reports are diffed and regression-tested as text, so the float format
//! is pinned: every `f64` is written as `{:.16e}` — 17 significant
//! digits, enough to round-trip any double exactly. Struct fields
//! serialize in declaration order, which keeps key order stable. CSV and
//! JSON render floats through the same helper so the two representations
//! agree to the last digit.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::element::Element;
use crate::harness::CellSummary;
use crate::transforms::TransformTable;

/// One float, 17 significant digits, exponent form.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

struct FixedFloats;

impl Formatter for FixedFloats {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize any report type to the pinned JSON text form.
pub fn to_json_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

/// CSV rendering of a transform table: `k,value` for scalar tables,
/// `k,x,value` for grid tables.
pub fn table_to_csv(table: &TransformTable) -> String {
    let mut out = String::new();
    match table.values().first() {
        Some(Element::Grid(first)) => {
            out.push_str("k,x,value\n");
            let points = first.len();
            let step = 1.0 / (points - 1) as f64;
            for (i, v) in table.values().iter().enumerate() {
                let Element::Grid(samples) = v else {
                    unreachable!("tables are space-homogeneous")
                };
                for (p, x) in samples.iter().enumerate() {
                    out.push_str(&format!(
                        "{},{},{}\n",
                        i + 1,
                        format_float(p as f64 * step),
                        format_float(*x)
                    ));
                }
            }
        }
        _ => {
            out.push_str("k,value\n");
            for (i, v) in table.values().iter().enumerate() {
                let Element::Scalar(x) = v else {
                    unreachable!("tables are space-homogeneous")
                };
                out.push_str(&format!("{},{}\n", i + 1, format_float(*x)));
            }
        }
    }
    out
}

/// CSV rendering of per-cell density profiles: `t,eps,j,density`.
pub fn densities_to_csv(cells: &[CellSummary]) -> String {
    let mut out = String::from("t,eps,j,density\n");
    for cell in cells {
        for (j, d) in &cell.densities {
            out.push_str(&format!(
                "{},{},{},{}\n",
                format_float(cell.t),
                format_float(cell.eps),
                j,
                format_float(*d)
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::Sequence;
    use crate::transforms::cesaro;

    #[test]
    fn floats_round_trip_exactly() {
        for &x in &[
            0.0,
            1.0,
            -3.5,
            std::f64::consts::PI,
            1.0 / 3.0,
            6.02e23,
            -1.6e-35,
            f64::MIN_POSITIVE,
        ] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn json_floats_use_the_pinned_format() {
        #[derive(Serialize)]
        struct Row {
            v: f64,
            n: u64,
        }
        let s = to_json_string(&Row { v: 18.0, n: 4 }).unwrap();
        assert_eq!(s, "{\"v\":1.8000000000000000e1,\"n\":4}");
        let parsed: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed["v"].as_f64(), Some(18.0));
    }

    #[test]
    fn scalar_csv_shape() {
        let t = cesaro(&Sequence::ex1(), 4).unwrap();
        let csv = table_to_csv(&t);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,value");
        assert_eq!(lines.len(), 5);
        assert!(lines[4].starts_with("4,"));
        assert_eq!(lines[4], format!("4,{}", format_float(5.0)));
    }

    #[test]
    fn grid_csv_shape() {
        let t = cesaro(&Sequence::ex3(11), 3).unwrap();
        let csv = table_to_csv(&t);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,x,value");
        assert_eq!(lines.len(), 1 + 3 * 11);
    }
}
