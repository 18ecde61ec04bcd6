//! Deterministic number formatting: every float in emitted files carries 17
//! significant digits, which round-trips f64 exactly and is byte-stable
//! across runs.

use std::io;

use serde::Serialize;

/// 17-significant-digit scientific notation, e.g. "5.0000000000000000e-1".
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct F17Formatter;

impl serde_json::ser::Formatter for F17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", fmt_f64(value))
    }
}

/// Compact JSON with the 17-digit float convention.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, F17Formatter);
    value
        .serialize(&mut ser)
        .expect("in-memory serialization cannot fail");
    String::from_utf8(out).expect("serde_json emits utf8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_round_trips_and_is_stable() {
        for x in [0.5, -0.25, 1.0, 0.0, 1.0 / 3.0, 0.09016994374947424] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn json_floats_use_the_convention() {
        #[derive(Serialize)]
        struct Doc {
            a: f64,
            n: usize,
        }
        let doc = Doc { a: 0.5, n: 3 };
        assert_eq!(to_json(&doc), r#"{"a":5.0000000000000000e-1,"n":3}"#);
    }
}
