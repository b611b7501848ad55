//! Output records and their JSON/CSV renderings.

use serde::{Deserialize, Serialize};
use spinchsh_core::oracle::Theorem1Check;
use spinchsh_core::svd3::Mat3;
use spinchsh_core::{MeasurementSettings, Route};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteMatrix {
    pub route: Route,
    pub z: Mat3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteTiming {
    pub route: Route,
    pub seconds: f64,
}

/// Everything computed for one state. Headline numbers come from the first
/// route listed in `z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub input: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub d: usize,
    pub s: f64,
    pub z: Vec<RouteMatrix>,
    /// Largest entrywise deviation of any route from the first one.
    pub route_max_deviation: f64,
    pub singular_values: [f64; 3],
    pub max_chsh: f64,
    pub gamma: f64,
    pub violates_lhv: bool,
    pub degenerate: bool,
    pub settings: MeasurementSettings,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Theorem1Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<RouteTiming>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormValues {
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Mat3>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub family: String,
    #[serde(flatten)]
    pub analysis: AnalysisRecord,
    pub closed_form: ClosedFormValues,
    /// max of |γ_closed − γ| and, when the closed form gives Z, every |ΔZ_ij|.
    pub closed_vs_pipeline_max_abs_dev: f64,
}

/// Shortest string that parses back to the same f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn csv_lines(fields: Vec<(&'static str, String)>) -> String {
    let (head, row): (Vec<_>, Vec<_>) = fields.into_iter().unzip();
    format!("{}\n{}\n", head.join(","), row.join(","))
}

impl AnalysisRecord {
    fn csv_fields(&self) -> Vec<(&'static str, String)> {
        const Z_NAMES: [[&str; 3]; 3] = [
            ["z11", "z12", "z13"],
            ["z21", "z22", "z23"],
            ["z31", "z32", "z33"],
        ];
        let mut out = vec![
            ("input", csv_escape(&self.input)),
            ("d", self.d.to_string()),
            ("s", fmt_f64(self.s)),
            ("route", self.z[0].route.name().to_owned()),
        ];
        for (i, names) in Z_NAMES.iter().enumerate() {
            for (j, name) in names.iter().enumerate() {
                out.push((name, fmt_f64(self.z[0].z[i][j])));
            }
        }
        for (name, v) in ["sv1", "sv2", "sv3"].into_iter().zip(self.singular_values) {
            out.push((name, fmt_f64(v)));
        }
        out.extend([
            ("max_chsh", fmt_f64(self.max_chsh)),
            ("gamma", fmt_f64(self.gamma)),
            ("violates_lhv", self.violates_lhv.to_string()),
            ("route_max_deviation", fmt_f64(self.route_max_deviation)),
            (
                "oracle_gap",
                self.oracle.map(|o| fmt_f64(o.abs_gap)).unwrap_or_default(),
            ),
        ]);
        out
    }

    pub fn to_csv(&self) -> String {
        csv_lines(self.csv_fields())
    }
}

impl FamilyRecord {
    pub fn to_csv(&self) -> String {
        let mut fields = vec![("family", self.family.clone())];
        fields.extend(self.analysis.csv_fields());
        fields.push(("gamma_closed", fmt_f64(self.closed_form.gamma)));
        fields.push((
            "closed_vs_pipeline_max_abs_dev",
            fmt_f64(self.closed_vs_pipeline_max_abs_dev),
        ));
        csv_lines(fields)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}
