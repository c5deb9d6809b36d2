use serde::Serialize;

use super::{StabilizationReport, Verdict, WitnessTree};

/// Outcome of one procedure run, serialized as TOML.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub procedure: String,
    pub group: String,
    pub formula: String,
    pub kmin: usize,
    pub kmax: usize,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width_profile: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surviving_from: Option<usize>,
}

impl Report {
    pub fn from_verdict(procedure: &str, group: &str, formula: &str, kmax: usize, v: &Verdict) -> Self {
        Report {
            procedure: procedure.into(),
            group: group.into(),
            formula: formula.into(),
            kmin: 0,
            kmax,
            verdict: v.to_string(),
            certificate: v.certificate().map(|c| c.to_string()),
            width_profile: None,
            values: None,
            surviving_from: None,
        }
    }

    pub fn from_witness_tree(group: &str, t: &WitnessTree) -> Self {
        let v = t.verdict();
        let mut r = Report::from_verdict("witness_tree", group, &t.matrix.to_string(), t.kmax, &v);
        if !t.survives() && !v.is_false() {
            r.verdict = format!("{v} (no surviving chain)");
        }
        r.width_profile = Some(t.widths());
        r.surviving_from = t.surviving_from();
        r
    }

    pub fn from_stabilization(group: &str, formula: &str, s: &StabilizationReport) -> Self {
        let verdict = match s.tail {
            Some((v, onset)) => format!("stabilized {v} from level {onset}"),
            None => "no stable tail".into(),
        };
        Report {
            procedure: "fv_stabilize".into(),
            group: group.into(),
            formula: formula.into(),
            kmin: s.kmin,
            kmax: s.kmax,
            verdict,
            certificate: None,
            width_profile: None,
            values: Some(s.values.clone()),
            surviving_from: None,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("report fields serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::Certificate;

    #[test]
    fn serializes_fields() {
        let v = Verdict::CertifiedTrue {
            level: 2,
            certificate: Certificate::IdentityExtension,
        };
        let text = Report::from_verdict("decide_exists_oi", "cp", "E x. x = 1", 8, &v).to_toml();
        assert!(text.contains("verdict = \"CertifiedTrue(2)\""));
        assert!(text.contains("certificate = "));
        assert!(!text.contains("width_profile"));
    }
}
