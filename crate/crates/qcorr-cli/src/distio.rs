//! Serialization of outcome distributions: CSV with one row per outcome
//! tuple, and a JSON mirror.

use serde::Serialize;

use qcorr_core::correlations::JointDistribution;

use crate::jsonfmt::fmt_f64;

/// Header = observable labels + "probability"; rows in canonical outcome
/// order (leftmost axis slowest).
pub fn distribution_to_csv(jd: &JointDistribution) -> String {
    let mut out = String::new();
    for axis in jd.axes() {
        out.push_str(&axis.observable);
        out.push(',');
    }
    out.push_str("probability\n");
    for (flat, p) in jd.probs().iter().enumerate() {
        let outcome = jd.unravel(flat);
        for (axis, &o) in jd.axes().iter().zip(&outcome) {
            out.push_str(&axis.outcomes[o]);
            out.push(',');
        }
        out.push_str(&fmt_f64(*p));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct AxisDoc<'a> {
    observable: &'a str,
    outcomes: &'a [String],
}

#[derive(Serialize)]
struct DistributionDoc<'a> {
    axes: Vec<AxisDoc<'a>>,
    probs: &'a [f64],
}

pub fn distribution_to_json(jd: &JointDistribution) -> String {
    let axes = jd
        .axes()
        .iter()
        .map(|a| AxisDoc { observable: &a.observable, outcomes: &a.outcomes })
        .collect();
    crate::jsonfmt::to_json(&DistributionDoc { axes, probs: jd.probs() })
}
