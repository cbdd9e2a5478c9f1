//! Reduction data for Falconer-type quadratics.
//!
//! Every Falconer-type `f` is rewritten through two lifting maps `F₁`, `F₂`
//! and the fixed bilinear phase `Ψ(u, v) = u₁v₁ − u₂v₂ + u₃ − v₃` so that
//! `Ψ(F₁(·), F₂(·)) = f(x, y, z) − f(x', y', z')` holds as a polynomial
//! identity. `Ψ` has constant nonzero bordered (Monge–Ampère) determinant.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::determinant;
use crate::poly::MPoly;
use crate::quadratic::{
    self, Classification, LemmaCase, Permutation, Quadratic3,
};
use crate::rational::{self, Rational};

pub const BILINEAR_PSI: &str = "u1*v1 - u2*v2 + u3 - v3";
pub const DIFFERENCE_OF_SQUARES_PSI: &str = "(u1-v1)^2 - (u2-v2)^2 + u3 - v3";

pub fn bilinear_psi() -> MPoly {
    BILINEAR_PSI.parse().expect("constant phase parses")
}

/// A polynomial map `R³ → R³`, named inputs to three component polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingMap {
    pub inputs: [String; 3],
    pub components: [MPoly; 3],
}

/// `p·y + q·z = rhs` in the `(y, z)` plane of the relabeled quadratic;
/// `y_var` and `z_var` name the original variables in those slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub y_var: String,
    pub z_var: String,
    pub p: Rational,
    pub q: Rational,
    pub rhs: Rational,
}

impl Line {
    pub fn contains(&self, y: &Rational, z: &Rational) -> bool {
        &self.p * y + &self.q * z == self.rhs
    }
}

/// Outcome of the `bc − 2ag = 0` branch. The degenerate fiber system
/// `b²e − abc + a²g = 0`, `(ib − ja)b = 0` is solvable only if `ib = ja` and
/// `4eg = c²` both hold in the chosen labeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case2Certificate {
    /// `b²e − abc + a²g`
    pub leading: Rational,
    /// `(ib − ja)·b`
    pub linear_constant: Rational,
    pub degenerate_system_solvable: bool,
    pub ib_eq_ja: bool,
    pub four_eg_eq_c2: bool,
}

impl Case2Certificate {
    /// The degenerate system has no solution, so no line has to be removed.
    pub fn contradiction(&self) -> bool {
        !self.degenerate_system_solvable
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BadSet {
    Line(Line),
    Empty(Case2Certificate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub psi: MPoly,
    pub f1: LiftingMap,
    pub f2: LiftingMap,
    pub bad_set: Option<BadSet>,
    pub case: LemmaCase,
    pub permutation: Permutation,
    pub ma_det: MPoly,
    target: MPoly,
}

impl Reduction {
    /// `Ψ(F₁, F₂) − (f(x,y,z) − f(x',y',z'))`; zero when the reduction is valid.
    pub fn identity_residual(&self) -> MPoly {
        let mut bindings = BTreeMap::new();
        for k in 0..3 {
            bindings.insert(format!("u{}", k + 1), self.f1.components[k].clone());
            bindings.insert(format!("v{}", k + 1), self.f2.components[k].clone());
        }
        &self.psi.substitute(&bindings) - &self.target
    }

    pub fn identity_holds(&self) -> bool {
        self.identity_residual().is_zero()
    }
}

/// Which variables play the `u` and `v` roles in a bordered determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSpec {
    pub u: [String; 3],
    pub v: [String; 3],
}

impl SplitSpec {
    pub fn new<S: AsRef<str>>(u: [S; 3], v: [S; 3]) -> Result<Self> {
        let u = u.map(|s| s.as_ref().to_string());
        let v = v.map(|s| s.as_ref().to_string());
        let mut all: Vec<&String> = u.iter().chain(v.iter()).collect();
        all.sort();
        all.dedup();
        if all.len() != 6 {
            return Err(Error::InvalidInput(
                "split must assign six distinct symbols".into(),
            ));
        }
        Ok(SplitSpec { u, v })
    }

    /// `u = (u1, u2, u3)`, `v = (v1, v2, v3)`.
    pub fn standard() -> Self {
        SplitSpec::new(["u1", "u2", "u3"], ["v1", "v2", "v3"]).unwrap()
    }

    /// First three symbols go to `u`, the last three to `v`, e.g.
    /// `[x, y', z, y, x', z']`.
    pub fn from_order<S: AsRef<str>>(order: [S; 6]) -> Result<Self> {
        let [a, b, c, d, e, f] = order;
        SplitSpec::new([a, b, c], [d, e, f])
    }
}

/// Bordered determinant
/// `det [[0, ∇ᵤΨ], [−∇ᵥΨᵀ, ∂²Ψ/∂vᵢ∂uⱼ]]` for the 3+3 split.
pub fn monge_ampere(psi: &MPoly, split: &SplitSpec) -> Result<MPoly> {
    let slots: Vec<&String> = split.u.iter().chain(split.v.iter()).collect();
    if let Some(stray) = psi.used_vars().iter().find(|v| !slots.contains(v)) {
        return Err(Error::DimensionMismatch(format!(
            "phase uses `{stray}`, which is not one of the six split symbols"
        )));
    }
    let psi = psi.with_vars(&slots);
    let grad_u: Vec<MPoly> = split
        .u
        .iter()
        .map(|s| psi.partial_derivative(s))
        .collect::<Result<_>>()?;
    let mut m = Vec::with_capacity(4);
    let mut top = vec![MPoly::zero()];
    top.extend(grad_u.iter().cloned());
    m.push(top);
    for vi in &split.v {
        let mut row = vec![-psi.partial_derivative(vi)?];
        for gu in &grad_u {
            row.push(gu.partial_derivative(vi)?);
        }
        m.push(row);
    }
    determinant(&m)
}

fn var(name: &str) -> MPoly {
    MPoly::var(name)
}

fn falconer_frame(f: &Quadratic3, c: &Classification) -> Result<(LemmaCase, Permutation)> {
    match c {
        Classification::FalconerType { case, permutation } => {
            let q = f.permuted(*permutation);
            let shape_ok = match case {
                LemmaCase::TwoCrossTerms => !q.a.is_zero() && q.c.is_zero(),
                LemmaCase::AllCrossTerms => {
                    !q.a.is_zero() && !q.b.is_zero() && !q.c.is_zero()
                }
            };
            if !shape_ok {
                return Err(Error::WrongCase(format!(
                    "relabeling {permutation} does not put f in the {case:?} shape"
                )));
            }
            Ok((case.clone(), *permutation))
        }
        other => Err(Error::WrongCase(format!(
            "reduction needs a Falconer-type quadratic, got {}",
            other.label()
        ))),
    }
}

pub fn build_reduction(f: &Quadratic3, c: &Classification) -> Result<Reduction> {
    let (case, perm) = falconer_frame(f, c)?;
    let q = f.permuted(perm);
    let [x, y, z] = perm.names();
    let [xp, yp, zp] = perm.primed_names();
    let names = |a: &str, b: &str, c: &str| [a.to_string(), b.to_string(), c.to_string()];

    let (f1, f2) = match case {
        LemmaCase::TwoCrossTerms => {
            // r(X) = dX² + hX, s(Y) = eY² + iY, t(Z) = gZ² + jZ
            let r = |v: &str| &var(v).pow(2).scale(&q.d) + &var(v).scale(&q.h);
            let s = |v: &str| &var(v).pow(2).scale(&q.e) + &var(v).scale(&q.i);
            let t = |v: &str| &var(v).pow(2).scale(&q.g) + &var(v).scale(&q.j);
            let bxz = |a: &str, b: &str| (&var(a) * &var(b)).scale(&q.b);
            let f1 = LiftingMap {
                inputs: names(x, yp, z),
                components: [
                    var(x),
                    var(yp),
                    bxz(x, z) + r(x) + t(z) - s(yp),
                ],
            };
            let f2 = LiftingMap {
                inputs: names(xp, y, zp),
                components: [
                    var(y).scale(&q.a),
                    var(xp).scale(&q.a),
                    bxz(xp, zp) + r(xp) + t(zp) - s(y),
                ],
            };
            (f1, f2)
        }
        LemmaCase::AllCrossTerms => {
            let third = |x: &str, y: &str, z: &str| {
                &var(x).pow(2).scale(&q.d) - &var(y).pow(2).scale(&q.e)
                    - (&var(y) * &var(z)).scale(&q.c)
                    - var(z).pow(2).scale(&q.g)
                    + var(x).scale(&q.h)
                    - var(y).scale(&q.i)
                    - var(z).scale(&q.j)
            };
            let f1 = LiftingMap {
                inputs: names(x, yp, zp),
                components: [
                    var(x),
                    &var(yp).scale(&q.a) + &var(zp).scale(&q.b),
                    third(x, yp, zp),
                ],
            };
            let f2 = LiftingMap {
                inputs: names(xp, y, z),
                components: [
                    &var(y).scale(&q.a) + &var(z).scale(&q.b),
                    var(xp),
                    third(xp, y, z),
                ],
            };
            (f1, f2)
        }
    };

    let psi = bilinear_psi();
    let ma_det = monge_ampere(&psi, &SplitSpec::standard())?;
    let bad_set = match case {
        LemmaCase::AllCrossTerms => Some(bad_set(f, c)?),
        LemmaCase::TwoCrossTerms => None,
    };
    Ok(Reduction {
        psi,
        f1,
        f2,
        bad_set,
        case,
        permutation: perm,
        ma_det,
        target: &f.to_poly() - &f.to_poly_in(quadratic::PRIMED),
    })
}

/// Classifies `f` and builds its reduction.
pub fn reduce(f: &Quadratic3) -> Result<Reduction> {
    let c = quadratic::classify(f)?;
    build_reduction(f, &c)
}

fn all_cross_frame(f: &Quadratic3, c: &Classification) -> Result<Quadratic3> {
    match falconer_frame(f, c)? {
        (LemmaCase::AllCrossTerms, perm) => Ok(f.permuted(perm)),
        (case, _) => Err(Error::WrongCase(format!(
            "needs all three cross terms, got {case:?}"
        ))),
    }
}

/// The line removed from `B × C` when `bc − 2ag ≠ 0`, or the certificate that
/// nothing has to be removed.
pub fn bad_set(f: &Quadratic3, c: &Classification) -> Result<BadSet> {
    let q = all_cross_frame(f, c)?;
    let [_, y, z] = match c {
        Classification::FalconerType { permutation, .. } => permutation.names(),
        _ => unreachable!(),
    };
    let Quadratic3 {
        a, b, c, e, g, i, j, ..
    } = &q;
    let two = rational::int(2);
    let denom = b * c - &two * a * g;
    if !denom.is_zero() {
        let num = i * b * b - j * a * b;
        return Ok(BadSet::Line(Line {
            y_var: y.to_string(),
            z_var: z.to_string(),
            p: a.clone(),
            q: b.clone(),
            rhs: -num / denom,
        }));
    }
    let leading = b * b * e - a * b * c + a * a * g;
    let linear_constant = (i * b - j * a) * b;
    Ok(BadSet::Empty(Case2Certificate {
        degenerate_system_solvable: leading.is_zero() && linear_constant.is_zero(),
        leading,
        linear_constant,
        ib_eq_ja: i * b == j * a,
        four_eg_eq_c2: rational::int(4) * e * g == c * c,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberCount {
    Finite(u8),
    Infinite,
}

/// Coefficients `[A, B, C]` of `A y'² + B y' + C = 0`, whose roots are the
/// `y'` with `F₁(u, y', (v − a y')/b) = (u, v, w)` in the relabeled frame.
pub fn fiber_quadratic(
    f: &Quadratic3,
    c: &Classification,
    point: [&Rational; 3],
) -> Result<[Rational; 3]> {
    let q = all_cross_frame(f, c)?;
    let [u, v, w] = point;
    let Quadratic3 {
        a,
        b,
        c,
        d,
        e,
        g,
        h,
        i,
        j,
        ..
    } = &q;
    let two = rational::int(2);
    let lead = b * b * e - a * b * c + a * a * g;
    let lin = b * c * v - &two * a * g * v + i * b * b - j * a * b;
    let cons = b * b * w - b * b * d * u * u + g * v * v - b * b * h * u + b * j * v;
    Ok([lead, lin, cons])
}

/// Number of rational `y'` in the fiber of `F₁` over `(u, v, w)`.
pub fn fiber_count(
    f: &Quadratic3,
    c: &Classification,
    point: [&Rational; 3],
) -> Result<FiberCount> {
    let [a2, a1, a0] = fiber_quadratic(f, c, point)?;
    Ok(count_rational_roots(&a2, &a1, &a0))
}

pub(crate) fn count_rational_roots(a2: &Rational, a1: &Rational, a0: &Rational) -> FiberCount {
    if a2.is_zero() {
        return match (a1.is_zero(), a0.is_zero()) {
            (true, true) => FiberCount::Infinite,
            (true, false) => FiberCount::Finite(0),
            (false, _) => FiberCount::Finite(1),
        };
    }
    let disc = a1 * a1 - rational::int(4) * a2 * a0;
    if disc.is_zero() {
        FiberCount::Finite(1)
    } else if rational::sqrt_exact(&disc).is_some() {
        FiberCount::Finite(2)
    } else {
        FiberCount::Finite(0)
    }
}

/// `F₁` evaluated in the relabeled frame of an all-cross-terms quadratic.
pub fn lift_point(
    f: &Quadratic3,
    c: &Classification,
    x: &Rational,
    yp: &Rational,
    zp: &Rational,
) -> Result<[Rational; 3]> {
    let q = all_cross_frame(f, c)?;
    let third = &q.d * x * x - &q.e * yp * yp - &q.c * yp * zp - &q.g * zp * zp + &q.h * x
        - &q.i * yp
        - &q.j * zp;
    Ok([x.clone(), &q.a * yp + &q.b * zp, third])
}
