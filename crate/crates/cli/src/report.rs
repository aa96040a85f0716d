//! CSV assembly. All floating-point values are serialized with 17
//! significant digits, which round-trips f64 exactly.

/// 17 significant digits; infinities print as "inf"/"-inf".
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if x == f64::INFINITY {
        "inf".to_string()
    } else {
        "nan".to_string()
    }
}

/// A CSV document with a fixed header; rows are plain comma joins (no
/// field of this tool ever contains a comma).
pub struct Csv {
    lines: Vec<String>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            lines: vec![header.join(",")],
        }
    }

    pub fn push_row(&mut self, fields: Vec<String>) {
        debug_assert_eq!(
            fields.len(),
            self.lines[0].split(',').count(),
            "row width must match the header"
        );
        self.lines.push(fields.join(","));
    }

    pub fn into_string(self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for &x in &[
            0.0,
            1.0,
            3.0,
            1.6180339887498949,
            -2.2250738585072014e-308,
            6.02214076e23,
            f64::NEG_INFINITY,
        ] {
            let text = fmt_float(x);
            let back: f64 = text.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{text}");
        }
    }

    #[test]
    fn csv_layout() {
        let mut csv = Csv::new(&["a", "b"]);
        csv.push_row(vec!["1".into(), "2".into()]);
        assert_eq!(csv.into_string(), "a,b\n1,2\n");
    }
}
