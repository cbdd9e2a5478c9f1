//! Dimension thresholds from chained lower bounds.
//!
//! A chain lists the dimensions fed into the condition
//! `dim A + dim B + dim C > target`, each as a function of a common
//! dimension `s`. The threshold is the smallest `s ∈ [0, 1]` at which the sum
//! reaches the target, solved exactly on the piecewise-linear sum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceBound {
    /// `dim Δ(E) ≥ min(4/3·dim E − 2/3, 1)` for planar `E` with `dim E > 1`.
    Liu,
    /// `dim Δ(E) ≥ 0`.
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Slot {
    /// A set of dimension `s`.
    Set,
    /// The distance set of `A^power` (dimension `power·s`), optionally
    /// squared, which preserves dimension.
    DistanceSet {
        power: u32,
        bound: DistanceBound,
        #[serde(default)]
        squared: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdChain {
    pub name: String,
    /// Exact rational as a string, e.g. `"2"`.
    pub target: String,
    pub slots: Vec<Slot>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdResult {
    pub name: String,
    pub threshold: Rational,
    /// Lower bound contributed by each slot at the threshold.
    pub slot_values: Vec<Rational>,
}

pub const PRESETS: [&str; 3] = ["corollary-1.4", "trivial-distance", "equal-sets"];

impl ThresholdChain {
    pub fn preset(name: &str) -> Result<Self> {
        let distance = |bound| Slot::DistanceSet {
            power: 2,
            bound,
            squared: true,
        };
        let slots = match name {
            "corollary-1.4" => vec![Slot::Set, Slot::Set, distance(DistanceBound::Liu)],
            "trivial-distance" => vec![Slot::Set, Slot::Set, distance(DistanceBound::Trivial)],
            "equal-sets" => vec![Slot::Set, Slot::Set, Slot::Set],
            _ => {
                return Err(Error::InvalidInput(format!(
                    "unknown chain `{name}` (known: {})",
                    PRESETS.join(", ")
                )))
            }
        };
        Ok(ThresholdChain {
            name: name.to_string(),
            target: "2".into(),
            slots,
        })
    }

    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::InvalidInput(format!("chain JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("chains serialize")
    }
}

fn slot_value(slot: &Slot, s: &Rational) -> Rational {
    match slot {
        Slot::Set => s.clone(),
        Slot::DistanceSet { power, bound, .. } => match bound {
            DistanceBound::Trivial => rational::int(0),
            DistanceBound::Liu => {
                let e = rational::int(*power as i64) * s;
                let v = rational::frac(4, 3) * e - rational::frac(2, 3);
                rational::max(&rational::int(0), &rational::min(&v, &rational::int(1)))
            }
        },
    }
}

fn total(slots: &[Slot], s: &Rational) -> Rational {
    slots.iter().map(|sl| slot_value(sl, s)).sum()
}

/// Points in `[0, 1]` where some slot changes slope.
fn breakpoints(slots: &[Slot]) -> Vec<Rational> {
    let mut pts = vec![rational::int(0), rational::int(1)];
    for sl in slots {
        if let Slot::DistanceSet {
            power,
            bound: DistanceBound::Liu,
            ..
        } = sl
        {
            let p = rational::int(*power as i64);
            // 4/3·p·s − 2/3 = 0 and = 1
            pts.push(rational::frac(1, 2) / &p);
            pts.push(rational::frac(5, 4) / &p);
        }
    }
    pts.retain(|t| *t >= rational::int(0) && *t <= rational::int(1));
    pts.sort();
    pts.dedup();
    pts
}

pub fn dimension_threshold(chain: &ThresholdChain) -> Result<ThresholdResult> {
    let target = rational::parse(&chain.target)?;
    if chain.slots.is_empty() {
        return Err(Error::InconsistentChain("chain has no slots".into()));
    }
    for sl in &chain.slots {
        if let Slot::DistanceSet { power, bound, .. } = sl {
            if *power == 0 {
                return Err(Error::InconsistentChain("distance set of A^0".into()));
            }
            if *bound == DistanceBound::Liu && *power != 2 {
                return Err(Error::InconsistentChain(format!(
                    "the 4/3 distance bound is planar; got A^{power}"
                )));
            }
        }
    }
    let pts = breakpoints(&chain.slots);
    let values: Vec<Rational> = pts.iter().map(|s| total(&chain.slots, s)).collect();
    let threshold = if values[0] >= target {
        pts[0].clone()
    } else {
        let k = values.iter().position(|v| *v >= target).ok_or_else(|| {
            Error::InconsistentChain(format!(
                "the bound sum at s = 1 is {}, never reaching {}",
                rational::format(values.last().expect("nonempty")),
                rational::format(&target)
            ))
        })?;
        // linear on [pts[k-1], pts[k]]
        let (s0, s1) = (&pts[k - 1], &pts[k]);
        let (v0, v1) = (&values[k - 1], &values[k]);
        s0 + (&target - v0) * (s1 - s0) / (v1 - v0)
    };
    for sl in &chain.slots {
        if let Slot::DistanceSet {
            power,
            bound: DistanceBound::Liu,
            ..
        } = sl
        {
            if rational::int(*power as i64) * &threshold <= rational::int(1) {
                return Err(Error::InconsistentChain(format!(
                    "the 4/3 distance bound needs dim A^{power} > 1, but the solution is s = {}",
                    rational::format(&threshold)
                )));
            }
        }
    }
    let slot_values = chain
        .slots
        .iter()
        .map(|sl| slot_value(sl, &threshold))
        .collect();
    Ok(ThresholdResult {
        name: chain.name.clone(),
        threshold,
        slot_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn solve(name: &str) -> Rational {
        dimension_threshold(&ThresholdChain::preset(name).unwrap())
            .unwrap()
            .threshold
    }

    #[test]
    fn presets() {
        assert_eq!(solve("corollary-1.4"), frac(4, 7));
        assert_eq!(solve("trivial-distance"), frac(1, 1));
        assert_eq!(solve("equal-sets"), frac(2, 3));
        assert!(ThresholdChain::preset("nope").is_err());
    }

    #[test]
    fn slot_values_at_threshold() {
        let r = dimension_threshold(&ThresholdChain::preset("corollary-1.4").unwrap()).unwrap();
        assert_eq!(r.slot_values, vec![frac(4, 7), frac(4, 7), frac(6, 7)]);
    }

    #[test]
    fn json_round_trip() {
        let c = ThresholdChain::preset("corollary-1.4").unwrap();
        assert_eq!(ThresholdChain::from_json(&c.to_json()).unwrap(), c);
        let src = r#"{"name":"custom","target":"2","slots":[
            {"kind":"set"},{"kind":"set"},
            {"kind":"distance-set","power":2,"bound":"liu"}]}"#;
        assert_eq!(
            dimension_threshold(&ThresholdChain::from_json(src).unwrap())
                .unwrap()
                .threshold,
            frac(4, 7)
        );
    }

    #[test]
    fn inconsistent_chains() {
        let unreachable = ThresholdChain {
            name: "x".into(),
            target: "3".into(),
            slots: vec![Slot::Set, Slot::Set],
        };
        assert!(matches!(
            dimension_threshold(&unreachable),
            Err(Error::InconsistentChain(_))
        ));
        // Liu's bound at s = 1/2 would need dim A² > 1
        let low = ThresholdChain {
            name: "x".into(),
            target: "1/2".into(),
            slots: vec![Slot::DistanceSet {
                power: 2,
                bound: DistanceBound::Liu,
                squared: false,
            }],
        };
        assert!(matches!(dimension_threshold(&low), Err(Error::InconsistentChain(_))));
        let wrong_power = ThresholdChain {
            name: "x".into(),
            target: "1".into(),
            slots: vec![Slot::DistanceSet {
                power: 3,
                bound: DistanceBound::Liu,
                squared: false,
            }],
        };
        assert!(dimension_threshold(&wrong_power).is_err());
    }
}
