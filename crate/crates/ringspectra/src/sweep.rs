//! Declarative parameter sweeps.

use std::collections::BTreeMap;

use rayon::prelude::*;
use ringspectra_core::builders::is_prime;
use ringspectra_core::formulas::classify_with;
use ringspectra_core::local::is_local;
use ringspectra_core::{parse_ring_spec, ElementId, FiniteRing, LocalProfile};
use serde::{Deserialize, Serialize};

use crate::report::{verify_with_profile, VerifyOptions, VerifyReport, SCHEMA};
use crate::{Error, Result};

/// Ring families; every member with order above the plan's `max_order` is skipped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// `Z_{p^e}`, `1 ≤ e ≤ max_exponent`.
    Zn { primes: Vec<u64>, max_exponent: u32 },
    /// `Z_p[x]/(x^e)`, `2 ≤ e ≤ max_exponent`.
    TruncatedPoly { primes: Vec<u64>, max_exponent: u32 },
    /// `F_q[x]/(x²)` for each `(p, r)`.
    DualNumbers { fields: Vec<(u64, u32)> },
    /// `nullext:p,r;n=N`, `2 ≤ N ≤ max_n`.
    NullExt { fields: Vec<(u64, u32)>, max_n: u32 },
    Specs { specs: Vec<String> },
}

/// Which elements of each ring are verified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum USelector {
    All,
    Units,
    /// Nonzero non-units.
    Strata,
    Zero,
    /// The first element of each (case, depth) class.
    Representatives,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepPlan {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub family: Family,
    pub u_selector: USelector,
    /// Defaults to the order cap.
    #[serde(default)]
    pub max_order: Option<usize>,
    /// Refuse plans that expand to more instances.
    #[serde(default)]
    pub limit: Option<usize>,
}

fn schema_version() -> u32 {
    SCHEMA
}

pub const DEFAULT_SWEEP_LIMIT: usize = 100_000;

fn prime_list(primes: &[u64]) -> Result<()> {
    match primes.iter().find(|&&p| !is_prime(p)) {
        Some(p) => Err(Error::Plan(format!("{p} is not prime"))),
        None => Ok(()),
    }
}

fn pow_within(base: u64, exp: u32, max: usize) -> bool {
    base.checked_pow(exp).is_some_and(|v| v <= max as u64)
}

impl SweepPlan {
    /// Ring specs in sweep order.
    pub fn ring_specs(&self, cap: usize) -> Result<Vec<String>> {
        let max = self.max_order.unwrap_or(cap);
        if max > cap {
            return Err(Error::Plan(format!("max_order {max} exceeds the order cap {cap}")));
        }
        let mut out = Vec::new();
        match &self.family {
            Family::Zn { primes, max_exponent } => {
                prime_list(primes)?;
                for &p in primes {
                    out.extend((1..=*max_exponent).filter(|&e| pow_within(p, e, max)).map(|e| format!("zn:{}", p.pow(e))));
                }
            }
            Family::TruncatedPoly { primes, max_exponent } => {
                prime_list(primes)?;
                for &p in primes {
                    out.extend(
                        (2..=*max_exponent).filter(|&e| pow_within(p, e, max)).map(|e| format!("polyquot:zn:{p};f=x^{e}")),
                    );
                }
            }
            Family::DualNumbers { fields } => {
                for &(p, r) in fields {
                    if pow_within(p, 2 * r, max) {
                        out.push(format!("polyquot:field:{p},{r};f=x^2"));
                    }
                }
            }
            Family::NullExt { fields, max_n } => {
                for &(p, r) in fields {
                    out.extend((2..=*max_n).filter(|&n| pow_within(p, r * n, max)).map(|n| format!("nullext:{p},{r};n={n}")));
                }
            }
            Family::Specs { specs } => {
                for s in specs {
                    let order = parse_ring_spec(s)?.order().unwrap_or(u128::MAX);
                    if order > max as u128 {
                        return Err(Error::Plan(format!("{s} has order {order}, above {max}")));
                    }
                    out.push(s.clone());
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseCounts {
    pub total: usize,
    pub matched: usize,
    pub mismatched: usize,
    pub unsupported: usize,
}

impl CaseCounts {
    fn add(&mut self, r: &VerifyReport) {
        self.total += 1;
        match r.matched {
            Some(true) => self.matched += 1,
            Some(false) => self.mismatched += 1,
            None => self.unsupported += 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub schema: u32,
    pub plan: SweepPlan,
    pub reports: Vec<VerifyReport>,
    pub per_case: BTreeMap<String, CaseCounts>,
    pub totals: CaseCounts,
    /// Instances with a failing auxiliary check.
    pub aux_failures: usize,
}

impl SweepOutcome {
    pub fn has_mismatch(&self) -> bool {
        self.totals.mismatched > 0
    }
}

struct Prepared {
    spec: String,
    ring: FiniteRing,
    profile: Option<LocalProfile>,
}

fn select(p: &Prepared, sel: USelector) -> Result<Vec<ElementId>> {
    let r = &p.ring;
    Ok(match sel {
        USelector::All => r.elements().collect(),
        USelector::Units => r.units(),
        USelector::Strata => r.non_units().into_iter().filter(|&a| a != r.zero()).collect(),
        USelector::Zero => vec![r.zero()],
        USelector::Representatives => {
            let mut seen = BTreeMap::new();
            for a in r.elements() {
                let key = match &p.profile {
                    Some(prof) => (classify_with(r, a, prof)?.tag.to_string(), prof.depth(a)),
                    None => (String::from("non_local"), 0),
                };
                seen.entry(key).or_insert(a);
            }
            let mut v: Vec<ElementId> = seen.into_values().collect();
            v.sort_unstable();
            v
        }
    })
}

/// Runs every instance, in parallel when `threads` allows, keeping plan order.
pub fn run_sweep(plan: &SweepPlan, cap: usize, threads: Option<usize>, opts: &VerifyOptions) -> Result<SweepOutcome> {
    let mut prepared = Vec::new();
    for spec in plan.ring_specs(cap)? {
        let ring = parse_ring_spec(&spec)?.build(cap)?;
        let profile = if is_local(&ring) { Some(LocalProfile::compute(&ring)?) } else { None };
        prepared.push(Prepared { spec, ring, profile });
    }
    let mut instances = Vec::new();
    for (i, p) in prepared.iter().enumerate() {
        instances.extend(select(p, plan.u_selector)?.into_iter().map(|u| (i, u)));
    }
    let limit = plan.limit.unwrap_or(DEFAULT_SWEEP_LIMIT);
    if instances.len() > limit {
        return Err(Error::Plan(format!("plan expands to {} instances, above the limit {limit}", instances.len())));
    }
    let work = || -> Result<Vec<VerifyReport>> {
        instances
            .par_iter()
            .map(|&(i, u)| {
                let p = &prepared[i];
                verify_with_profile(&p.ring, &p.spec, u, p.profile.as_ref(), opts)
            })
            .collect()
    };
    let reports = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Plan(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    let mut per_case: BTreeMap<String, CaseCounts> = BTreeMap::new();
    let mut totals = CaseCounts::default();
    for r in &reports {
        per_case.entry(r.case.clone()).or_default().add(r);
        totals.add(r);
    }
    let aux_failures = reports.iter().filter(|r| !r.aux_ok()).count();
    Ok(SweepOutcome { schema: SCHEMA, plan: plan.clone(), reports, per_case, totals, aux_failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(json: &str) -> SweepPlan {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn zn_plan_expands_in_order() {
        let p = plan(r#"{"family":{"kind":"zn","primes":[2,3],"max_exponent":3},"u_selector":"zero","max_order":10}"#);
        assert_eq!(p.ring_specs(4096).unwrap(), ["zn:2", "zn:4", "zn:8", "zn:3", "zn:9"]);
        assert_eq!(p.schema, 1);
    }

    #[test]
    fn plan_errors() {
        let bad = plan(r#"{"family":{"kind":"zn","primes":[4],"max_exponent":2},"u_selector":"all"}"#);
        assert!(matches!(bad.ring_specs(4096), Err(Error::Plan(_))));
        let big = plan(r#"{"family":{"kind":"specs","specs":["zn:5000"]},"u_selector":"all"}"#);
        assert!(matches!(big.ring_specs(4096), Err(Error::Plan(_))));
        let over = plan(r#"{"family":{"kind":"zn","primes":[2],"max_exponent":2},"u_selector":"all","max_order":9000}"#);
        assert!(over.ring_specs(4096).is_err());
        let many = plan(r#"{"family":{"kind":"zn","primes":[2],"max_exponent":6},"u_selector":"all","limit":10}"#);
        assert!(matches!(run_sweep(&many, 4096, Some(1), &VerifyOptions::default()), Err(Error::Plan(_))));
    }

    #[test]
    fn nullext_representatives_cover_every_branch() {
        let p = plan(
            r#"{"family":{"kind":"null_ext","fields":[[2,1],[3,1],[2,2],[5,1]],"max_n":3},"u_selector":"representatives","max_order":125}"#,
        );
        let out = run_sweep(&p, 4096, Some(1), &VerifyOptions::default()).unwrap();
        for tag in ["J2_ZERO_U0", "J2_ZERO_UNIT_SQ_EVEN", "J2_ZERO_UNIT_NONSQ_EVEN", "J2_ZERO_UNIT_SQ_ODD", "J2_ZERO_UNIT_NONSQ_ODD", "J2_ZERO_RADICAL"] {
            assert!(out.per_case.contains_key(tag), "{tag}");
        }
        assert_eq!(out.totals.mismatched, 0);
        let t = out.totals;
        assert_eq!(t.matched + t.mismatched + t.unsupported, t.total);
    }

    #[test]
    fn parallel_sweep_keeps_order() {
        let p = plan(r#"{"family":{"kind":"zn","primes":[2,3],"max_exponent":3},"u_selector":"all"}"#);
        let one = run_sweep(&p, 4096, Some(1), &VerifyOptions::default()).unwrap();
        let two = run_sweep(&p, 4096, Some(2), &VerifyOptions::default()).unwrap();
        assert_eq!(one, two);
        assert_eq!(one.reports[0].ring_spec, "zn:2");
    }
}
