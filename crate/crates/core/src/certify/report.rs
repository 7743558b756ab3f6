use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use super::{
    deficiency_sets, is_k_geodetic, outliers, repeats, structure_audit, total_regularity, AuditCheck,
    CertifyError, DegreeViolation, Mode,
};
use crate::bounds::moore_bound;
use crate::graph::{DegreeProfile, MixedGraph};
use crate::walks::diameter;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Classification {
    /// Order equal to the Moore bound.
    Moore,
    Defect { delta: u64 },
    Excess { epsilon: u64 },
    OutOfFamily { reason: String },
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Moore => write!(f, "moore"),
            Classification::Defect { delta } => write!(f, "defect {delta}"),
            Classification::Excess { epsilon } => write!(f, "excess {epsilon}"),
            Classification::OutOfFamily { reason } => write!(f, "out-of-family ({reason})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub r: usize,
    pub z: usize,
    pub k: usize,
    pub mode: Mode,
    pub order: usize,
    pub moore_bound: u64,
    pub degrees: DegreeProfile,
    pub classification: Classification,
    pub delta: Option<u64>,
    pub epsilon: Option<u64>,
    pub geodetic: bool,
    /// `None` when some ordered pair is unreachable.
    pub diameter: Option<usize>,
    pub totally_regular: bool,
    pub repeats: Option<Vec<usize>>,
    pub outliers: Option<Vec<usize>>,
    #[serde(rename = "S")]
    pub s: BTreeSet<usize>,
    #[serde(rename = "Sprime")]
    pub s_prime: BTreeSet<usize>,
    pub audits: Vec<AuditCheck>,
}

impl CheckReport {
    /// The graph belongs to the family the mode asks about.
    pub fn in_family(&self) -> bool {
        !matches!(self.classification, Classification::OutOfFamily { .. })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// `key: value` lines with the fixed field names.
    pub fn to_key_value(&self) -> String {
        let opt = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
        let map = |m: &Option<Vec<usize>>| match m {
            None => "-".to_string(),
            Some(m) => m.iter().enumerate().map(|(u, v)| format!("{u}->{v}")).collect::<Vec<_>>().join(" "),
        };
        let set = |s: &BTreeSet<usize>| {
            format!("{{{}}}", s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
        };
        let mut out = String::new();
        writeln!(out, "parameters: r={} z={} k={} mode={}", self.r, self.z, self.k, self.mode).unwrap();
        writeln!(out, "order: {}", self.order).unwrap();
        writeln!(out, "moore_bound: {}", self.moore_bound).unwrap();
        writeln!(out, "classification: {}", self.classification).unwrap();
        writeln!(out, "delta: {}", opt(self.delta)).unwrap();
        writeln!(out, "epsilon: {}", opt(self.epsilon)).unwrap();
        writeln!(out, "geodetic: {}", self.geodetic).unwrap();
        writeln!(out, "diameter: {}", self.diameter.map_or("infinite".to_string(), |d| d.to_string())).unwrap();
        writeln!(out, "totally_regular: {}", self.totally_regular).unwrap();
        writeln!(out, "repeats: {}", map(&self.repeats)).unwrap();
        writeln!(out, "outliers: {}", map(&self.outliers)).unwrap();
        writeln!(out, "S: {}", set(&self.s)).unwrap();
        writeln!(out, "Sprime: {}", set(&self.s_prime)).unwrap();
        for (i, a) in self.audits.iter().enumerate() {
            writeln!(out, "audits[{i}]: {} = {}{}", a.name, a.outcome, a.detail.as_ref().map_or(String::new(), |d| format!(" ({d})"))).unwrap();
        }
        out
    }
}

fn degree_violations(g: &MixedGraph, r: usize, z: usize, mode: Mode) -> Vec<DegreeViolation> {
    g.degrees()
        .vertices
        .iter()
        .enumerate()
        .filter(|(_, d)| match mode {
            Mode::Defect => d.undirected > r || d.out > z,
            Mode::Excess => d.undirected < r || d.out < z,
        })
        .map(|(vertex, d)| DegreeViolation { vertex, undirected: d.undirected, out: d.out })
        .collect()
}

/// Classification against `M(r, z, k)` without computing maps or audits.
pub fn classify(g: &MixedGraph, r: usize, z: usize, k: usize, mode: Mode) -> Result<Classification, CertifyError> {
    let violations = degree_violations(g, r, z, mode);
    if !violations.is_empty() {
        return Err(CertifyError::DegreeBound(violations));
    }
    let bound = moore_bound(r as u64, z as u64, k as u64)
        .as_u64()
        .ok_or_else(|| CertifyError::Precondition("Moore bound exceeds 64 bits".into()))?;
    let n = g.order() as u64;
    let out = |reason: &str| Ok(Classification::OutOfFamily { reason: reason.to_string() });
    match mode {
        Mode::Defect => {
            if n > bound {
                return out("order exceeds the Moore bound");
            }
            if !diameter(g).is_some_and(|d| d <= k) {
                return out("diameter exceeds k");
            }
            Ok(match bound - n {
                0 => Classification::Moore,
                delta => Classification::Defect { delta },
            })
        }
        Mode::Excess => {
            if n < bound {
                return out("order below the Moore bound");
            }
            if !is_k_geodetic(g, k).geodetic {
                return out("not k-geodetic");
            }
            Ok(match n - bound {
                0 => Classification::Moore,
                epsilon => Classification::Excess { epsilon },
            })
        }
    }
}

/// Full certificate of `g` against the parameters `(r, z, k)`. In defect
/// mode the degrees are upper bounds and the diameter must be at most `k`;
/// in excess mode the degrees are lower bounds and `g` must be k-geodetic.
pub fn check_graph(g: &MixedGraph, r: usize, z: usize, k: usize, mode: Mode) -> Result<CheckReport, CertifyError> {
    let classification = classify(g, r, z, k, mode)?;
    let bound = moore_bound(r as u64, z as u64, k as u64).as_u64().unwrap_or(u64::MAX);
    let (delta, epsilon) = match (&classification, mode) {
        (Classification::Moore, Mode::Defect) => (Some(0), None),
        (Classification::Moore, Mode::Excess) => (None, Some(0)),
        (Classification::Defect { delta }, _) => (Some(*delta), None),
        (Classification::Excess { epsilon }, _) => (None, Some(*epsilon)),
        (Classification::OutOfFamily { .. }, _) => (None, None),
    };
    let repeats = (delta == Some(1)).then(|| repeats(g, k).ok()).flatten();
    let outliers = (epsilon == Some(1)).then(|| outliers(g, k).ok()).flatten();
    let audits = if delta == Some(1) || epsilon == Some(1) {
        structure_audit(g, r, z, k, mode).unwrap_or_default()
    } else {
        Vec::new()
    };
    let (s, s_prime) = deficiency_sets(g, z);
    Ok(CheckReport {
        r,
        z,
        k,
        mode,
        order: g.order(),
        moore_bound: bound,
        degrees: g.degrees(),
        delta,
        epsilon,
        geodetic: is_k_geodetic(g, k).geodetic,
        diameter: diameter(g),
        totally_regular: total_regularity(g, r, z),
        repeats,
        outliers,
        s,
        s_prime,
        audits,
        classification,
    })
}
