//! JSON views of results. Exact quantities are rendered as `p/q` strings.

use serde_json::{json, Value};

use crate::finite_field::{CensusReport, CensusRow};
use crate::fractal::NearZeroMass;
use crate::poly::MPoly;
use crate::quadratic::{Classification, DegenerateWitness, LemmaCase, Permutation, Quadratic3};
use crate::rational::{self, Rational};
use crate::reduction::{BadSet, LiftingMap, Reduction};
use crate::threshold::ThresholdResult;

fn r(x: &Rational) -> Value {
    Value::String(rational::format(x))
}

fn case_name(c: &LemmaCase) -> &'static str {
    match c {
        LemmaCase::TwoCrossTerms => "TwoCrossTerms",
        LemmaCase::AllCrossTerms => "AllCrossTerms",
    }
}

fn permutation(p: &Permutation) -> Value {
    json!(p.names())
}

pub fn classification(f: &Quadratic3, c: &Classification) -> Value {
    let mut out = json!({
        "polynomial": f.to_string(),
        "verdict": c.label(),
    });
    match c {
        Classification::MissingVariable(missing) => {
            let names: Vec<&str> = crate::quadratic::VARS
                .iter()
                .zip(missing)
                .filter(|(_, m)| **m)
                .map(|(v, _)| *v)
                .collect();
            out["missing"] = json!(names);
        }
        Classification::DegenerateAdditive => {
            out["witness"] = json!({ "form": "H(x) + K(y) + L(z)" });
        }
        Classification::DegenerateSquare(w) => {
            if let DegenerateWitness::Square {
                alpha,
                beta,
                gamma,
                inner,
            } = w
            {
                out["witness"] = json!({
                    "form": "alpha*w^2 + beta*w + gamma",
                    "alpha": r(alpha),
                    "beta": r(beta),
                    "gamma": r(gamma),
                    "w": [r(&inner[0]), r(&inner[1]), r(&inner[2])],
                    "expanded": w.expand().map(|p| p.to_string()),
                });
            }
        }
        Classification::FalconerType { case, permutation: p } => {
            out["case"] = json!(case_name(case));
            out["permutation"] = permutation(p);
        }
    }
    out
}

fn lifting_map(m: &LiftingMap) -> Value {
    json!({
        "inputs": m.inputs,
        "components": m.components.iter().map(MPoly::to_string).collect::<Vec<_>>(),
    })
}

pub fn reduction(f: &Quadratic3, red: &Reduction) -> Value {
    let bad_set = match &red.bad_set {
        None => Value::Null,
        Some(BadSet::Line(l)) => json!({
            "kind": "line",
            "equation": format!(
                "{}*{} + {}*{} = {}",
                rational::format(&l.p),
                l.y_var,
                rational::format(&l.q),
                l.z_var,
                rational::format(&l.rhs)
            ),
            "p": r(&l.p),
            "q": r(&l.q),
            "rhs": r(&l.rhs),
            "y_var": l.y_var,
            "z_var": l.z_var,
        }),
        Some(BadSet::Empty(cert)) => json!({
            "kind": "empty",
            "leading": r(&cert.leading),
            "linear_constant": r(&cert.linear_constant),
            "degenerate_system_solvable": cert.degenerate_system_solvable,
            "ib_eq_ja": cert.ib_eq_ja,
            "four_eg_eq_c2": cert.four_eg_eq_c2,
            "contradiction": cert.contradiction(),
        }),
    };
    json!({
        "polynomial": f.to_string(),
        "case": case_name(&red.case),
        "permutation": permutation(&red.permutation),
        "psi": red.psi.to_string(),
        "f1": lifting_map(&red.f1),
        "f2": lifting_map(&red.f2),
        "bad_set": bad_set,
        "monge_ampere": red.ma_det.to_string(),
        "identity_residual": red.identity_residual().to_string(),
        "identity_holds": red.identity_holds(),
    })
}

pub fn curvature(psi: &MPoly, u: &[String; 3], v: &[String; 3], det: &MPoly) -> Value {
    json!({
        "psi": psi.to_string(),
        "u": u,
        "v": v,
        "determinant": det.to_string(),
        "nonvanishing_constant": det.constant_value().is_some_and(|c| c != Rational::from_integer(0.into())),
    })
}

fn census_row(row: &CensusRow) -> Value {
    json!({
        "p": row.p,
        "N": row.n,
        "family": row.family.name(),
        "seed": row.seed,
        "trial": row.trial,
        "image_size": row.image_size,
        "ratio": row.ratio_exact(),
        "ratio_float": format!("{:.6}", row.ratio()),
    })
}

pub fn census(f: &Quadratic3, rep: &CensusReport) -> Value {
    json!({
        "polynomial": f.to_string(),
        "min_ratio_float": rep.min_ratio().map(|x| format!("{x:.6}")),
        "rows": rep.rows.iter().map(census_row).collect::<Vec<_>>(),
    })
}

pub fn near_zero_mass(rows: &[NearZeroMass]) -> Value {
    let ratios: Vec<&Rational> = rows.iter().map(|m| &m.ratio).collect();
    let spread = match (ratios.iter().min(), ratios.iter().max()) {
        (Some(lo), Some(hi)) if **lo != Rational::from_integer(0.into()) => Some(r(&(*hi / *lo))),
        _ => None,
    };
    json!({
        "rows": rows.iter().map(|m| json!({
            "epsilon": r(&m.epsilon),
            "pairs": m.pairs.to_string(),
            "mass": r(&m.mass),
            "ratio": r(&m.ratio),
            "ratio_float": format!("{:.6}", rational::to_f64(&m.ratio)),
        })).collect::<Vec<_>>(),
        "max_over_min": spread,
    })
}

pub fn sharpness(rows: &[(u32, Rational)]) -> Value {
    json!({
        "rows": rows.iter().map(|(k, m)| json!({
            "depth": k,
            "measure": r(m),
            "measure_float": format!("{:.6}", rational::to_f64(m)),
        })).collect::<Vec<_>>(),
    })
}

pub fn threshold(res: &ThresholdResult) -> Value {
    json!({
        "chain": res.name,
        "threshold": r(&res.threshold),
        "slot_values": res.slot_values.iter().map(r).collect::<Vec<_>>(),
    })
}
