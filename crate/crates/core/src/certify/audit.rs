use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{deficiency_sets, outliers, repeats, CertifyError, Mode};
use crate::bounds::moore_bound;
use crate::graph::MixedGraph;
use crate::walks::undirected_distances_from;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditOutcome {
    Pass,
    Fail,
    /// `S = S′ = ∅`: the statement has nothing to constrain.
    Vacuous,
}

impl fmt::Display for AuditOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AuditOutcome::Pass => "pass",
            AuditOutcome::Fail => "fail",
            AuditOutcome::Vacuous => "vacuous",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditCheck {
    pub name: String,
    pub outcome: AuditOutcome,
    pub detail: Option<String>,
}

impl AuditCheck {
    fn new(name: &str, outcome: AuditOutcome, detail: Option<String>) -> Self {
        AuditCheck { name: name.to_string(), outcome, detail }
    }

    fn verdict(name: &str, ok: bool, detail: Option<String>) -> Self {
        Self::new(name, if ok { AuditOutcome::Pass } else { AuditOutcome::Fail }, detail)
    }

    fn vacuous(name: &str) -> Self {
        Self::new(name, AuditOutcome::Vacuous, None)
    }
}

fn set_str(s: &BTreeSet<usize>) -> String {
    format!("{{{}}}", s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
}

/// Structural statements about defect-one and excess-one graphs, checked on
/// `g`. Requires `g` out-regular with degrees `(r, z)` and of order `M ∓ 1`.
/// Checks that need the repeat or outlier map fail when the map does not
/// exist.
pub fn structure_audit(
    g: &MixedGraph,
    r: usize,
    z: usize,
    k: usize,
    mode: Mode,
) -> Result<Vec<AuditCheck>, CertifyError> {
    let n = g.order();
    if !g.degrees().is_out_regular_with(r, z) {
        return Err(CertifyError::Precondition(format!("graph is not out-regular with r={r}, z={z}")));
    }
    let bound = moore_bound(r as u64, z as u64, k as u64).as_u64().unwrap_or(u64::MAX);
    let expected = match mode {
        Mode::Defect => bound.checked_sub(1),
        Mode::Excess => bound.checked_add(1),
    };
    if expected != Some(n as u64) {
        return Err(CertifyError::Precondition(format!(
            "order {n} does not match M({r},{z},{k}) {} 1 = {expected:?}",
            if mode == Mode::Defect { "-" } else { "+" }
        )));
    }
    let (s, s_prime) = deficiency_sets(g, z);
    let vacuous = s.is_empty() && s_prime.is_empty();
    let out_set = |u: usize| g.out_neighbors(u).iter().copied().collect::<BTreeSet<_>>();
    let indeg = |v: usize| g.in_neighbors(v).len();
    let mut checks = Vec::new();

    match mode {
        Mode::Defect => {
            let rep = repeats(g, k).ok();
            let names = [
                "S_in_out_neighborhood_of_repeat",
                "in_degree_balance",
                "Sprime_in_repeat_image",
                "S_equals_out_neighborhood_of_repeat",
            ];
            if vacuous {
                checks.extend(names.iter().map(|n| AuditCheck::vacuous(n)));
                return Ok(checks);
            }
            let no_map = || Some("repeat map undefined".to_string());

            checks.push(match &rep {
                None => AuditCheck::verdict(names[0], false, no_map()),
                Some(rep) => {
                    let bad_deg = s.iter().copied().find(|&v| indeg(v) + 1 != z);
                    let bad_root = (0..n).find(|&u| !s.is_subset(&out_set(rep[u])));
                    let detail = match (bad_deg, bad_root) {
                        (Some(v), _) => Some(format!("vertex {v} in S has in-degree {}", indeg(v))),
                        (_, Some(u)) => Some(format!("S not inside N+(r({u}))")),
                        _ => None,
                    };
                    AuditCheck::verdict(names[0], detail.is_none(), detail)
                }
            });

            let over: usize = s_prime.iter().map(|&v| indeg(v) - z).sum();
            let under: usize = s.iter().map(|&v| z - indeg(v)).sum();
            checks.push(AuditCheck::verdict(names[1], over == under, Some(format!("excess {over}, deficit {under}"))));

            checks.push(match &rep {
                None => AuditCheck::verdict(names[2], false, no_map()),
                Some(rep) => {
                    let bad = (0..n).find(|&u| {
                        let image: BTreeSet<usize> = g.out_neighbors(u).iter().map(|&w| rep[w]).collect();
                        !s_prime.is_subset(&image)
                    });
                    AuditCheck::verdict(names[2], bad.is_none(), bad.map(|u| format!("Sprime not inside r(N+({u}))")))
                }
            });

            checks.push(match &rep {
                None => AuditCheck::verdict(names[3], false, no_map()),
                Some(rep) => {
                    let bad = (0..n).find(|&u| out_set(rep[u]) != s);
                    AuditCheck::verdict(
                        names[3],
                        bad.is_none(),
                        bad.map(|u| format!("S = {} but N+(r({u})) = {}", set_str(&s), set_str(&out_set(rep[u])))),
                    )
                }
            });
        }
        Mode::Excess => {
            let out = outliers(g, k).ok();
            let names = ["outlier_of_successor_in_S", "Sprime_equals_out_neighborhood_of_outlier"];
            if vacuous {
                checks.extend(names.iter().map(|n| AuditCheck::vacuous(n)));
            } else {
                let no_map = || Some("outlier map undefined".to_string());
                checks.push(match (&out, z) {
                    (None, _) => AuditCheck::verdict(names[0], false, no_map()),
                    (Some(_), z) if z != 1 => {
                        AuditCheck::new(names[0], AuditOutcome::Vacuous, Some("stated for z = 1 only".into()))
                    }
                    (Some(o), _) => {
                        let bad = s.iter().find(|&&v| o[g.out_neighbors(v)[0]] != v);
                        AuditCheck::verdict(names[0], bad.is_none(), bad.map(|v| format!("o(v+) != v for v = {v}")))
                    }
                });
                checks.push(match &out {
                    None => AuditCheck::verdict(names[1], false, no_map()),
                    Some(o) => {
                        let bad = (0..n).find(|&u| out_set(o[u]) != s_prime);
                        AuditCheck::verdict(names[1], bad.is_none(), bad.map(|u| format!("N+(o({u})) != Sprime")))
                    }
                });
            }
            if (r, z, k) == (2, 1, 2) {
                let bad = g.arcs().iter().find(|&&(a, b)| undirected_distances_from(g, a)[b].is_some_and(|d| d < 4));
                checks.push(AuditCheck::verdict(
                    "arcs_span_undirected_distance_4",
                    bad.is_none(),
                    bad.map(|(a, b)| format!("arc {a}->{b} spans undirected distance < 4")),
                ));
                let connected = undirected_distances_from(g, 0).iter().all(Option::is_some);
                checks.push(AuditCheck::verdict(
                    "undirected_part_single_cycle",
                    connected,
                    (!connected).then(|| "undirected part is disconnected".to_string()),
                ));
            }
        }
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{almost_moore_10, excess_one_12};

    #[test]
    fn regular_fixtures_are_vacuous_or_pass() {
        let a = structure_audit(&almost_moore_10(), 2, 1, 2, Mode::Defect).unwrap();
        assert_eq!(a.len(), 4);
        assert!(a.iter().all(|c| c.outcome == AuditOutcome::Vacuous));
        let a = structure_audit(&excess_one_12(), 2, 1, 2, Mode::Excess).unwrap();
        let outcomes: Vec<_> = a.iter().map(|c| c.outcome).collect();
        use AuditOutcome::*;
        assert_eq!(outcomes, vec![Vacuous, Vacuous, Pass, Pass]);
    }

    #[test]
    fn short_arc_fails() {
        let g = excess_one_12();
        let arcs: Vec<_> = g.arcs().iter().map(|&(a, b)| if (a, b) == (0, 4) { (0, 2) } else { (a, b) }).collect();
        let h = MixedGraph::new(12, g.edges().iter().copied(), arcs).unwrap();
        let a = structure_audit(&h, 2, 1, 2, Mode::Excess).unwrap();
        let find = |n: &str| a.iter().find(|c| c.name == n).unwrap().outcome;
        assert_eq!(find("arcs_span_undirected_distance_4"), AuditOutcome::Fail);
        assert_eq!(find("undirected_part_single_cycle"), AuditOutcome::Pass);
        assert_eq!(find("Sprime_equals_out_neighborhood_of_outlier"), AuditOutcome::Fail);
    }

    #[test]
    fn mismatch_is_error() {
        assert!(structure_audit(&almost_moore_10(), 2, 1, 2, Mode::Excess).is_err());
        assert!(structure_audit(&excess_one_12(), 2, 1, 2, Mode::Defect).is_err());
    }
}
