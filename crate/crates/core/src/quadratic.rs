//! Trivariate quadratics and the degenerate / Falconer-type dichotomy.
//!
//! A quadratic `f = a xy + b xz + c yz + d x² + e y² + g z² + h x + i y + j z + k0`
//! is *degenerate* when it can be written as `G(H(x) + K(y) + L(z))` for
//! polynomials `G, H, K, L`. For degree two this leaves exactly two shapes:
//! additive (`a = b = c = 0`) and a quadratic in a single linear form
//! `α w² + β w + γ`, `w = h₁x + k₁y + l₁z`. Everything that depends on all
//! three variables and is not degenerate is Falconer-type.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::MPoly;
use crate::rational::{self, Rational};

pub const VARS: [&str; 3] = ["x", "y", "z"];
pub const PRIMED: [&str; 3] = ["x'", "y'", "z'"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadratic3 {
    /// xy
    pub a: Rational,
    /// xz
    pub b: Rational,
    /// yz
    pub c: Rational,
    /// x²
    pub d: Rational,
    /// y²
    pub e: Rational,
    /// z²
    pub g: Rational,
    /// x
    pub h: Rational,
    /// y
    pub i: Rational,
    /// z
    pub j: Rational,
    pub k0: Rational,
}

impl Quadratic3 {
    /// Coefficients in the order `a, b, c, d, e, g, h, i, j, k0`.
    pub fn new(coeffs: [Rational; 10]) -> Self {
        let [a, b, c, d, e, g, h, i, j, k0] = coeffs;
        Quadratic3 {
            a,
            b,
            c,
            d,
            e,
            g,
            h,
            i,
            j,
            k0,
        }
    }

    pub fn from_ints(coeffs: [i64; 10]) -> Self {
        Self::new(coeffs.map(rational::int))
    }

    pub fn coefficients(&self) -> [Rational; 10] {
        [
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
            self.e.clone(),
            self.g.clone(),
            self.h.clone(),
            self.i.clone(),
            self.j.clone(),
            self.k0.clone(),
        ]
    }

    pub fn parse(src: &str) -> Result<Self> {
        Self::from_poly(&src.parse()?)
    }

    pub fn from_poly(p: &MPoly) -> Result<Self> {
        for v in p.used_vars() {
            if !VARS.contains(&v.as_str()) {
                return Err(Error::NotQuadratic(format!(
                    "variable `{v}` is not one of x, y, z"
                )));
            }
        }
        if p.total_degree() > 2 {
            return Err(Error::NotQuadratic(format!(
                "total degree {} exceeds 2",
                p.total_degree()
            )));
        }
        let c = |powers: &[(&str, u32)]| p.coefficient(powers);
        Ok(Quadratic3 {
            a: c(&[("x", 1), ("y", 1)]),
            b: c(&[("x", 1), ("z", 1)]),
            c: c(&[("y", 1), ("z", 1)]),
            d: c(&[("x", 2)]),
            e: c(&[("y", 2)]),
            g: c(&[("z", 2)]),
            h: c(&[("x", 1)]),
            i: c(&[("y", 1)]),
            j: c(&[("z", 1)]),
            k0: c(&[]),
        })
    }

    pub fn to_poly(&self) -> MPoly {
        self.to_poly_in(VARS)
    }

    /// The same polynomial with `x, y, z` renamed to `names`.
    pub fn to_poly_in(&self, names: [&str; 3]) -> MPoly {
        let [x, y, z] = names;
        let mut terms = Vec::with_capacity(10);
        let mut push = |e: [u32; 3], c: &Rational| terms.push((e.to_vec(), c.clone()));
        push([1, 1, 0], &self.a);
        push([1, 0, 1], &self.b);
        push([0, 1, 1], &self.c);
        push([2, 0, 0], &self.d);
        push([0, 2, 0], &self.e);
        push([0, 0, 2], &self.g);
        push([1, 0, 0], &self.h);
        push([0, 1, 0], &self.i);
        push([0, 0, 1], &self.j);
        push([0, 0, 0], &self.k0);
        MPoly::from_terms(&[x, y, z], terms).expect("distinct variable names")
    }

    /// Coefficient of the cross term between variables `p` and `q` (0..3).
    pub fn cross(&self, p: usize, q: usize) -> &Rational {
        match (p.min(q), p.max(q)) {
            (0, 1) => &self.a,
            (0, 2) => &self.b,
            (1, 2) => &self.c,
            _ => panic!("cross term needs two distinct variables"),
        }
    }

    pub fn square(&self, p: usize) -> &Rational {
        [&self.d, &self.e, &self.g][p]
    }

    pub fn linear(&self, p: usize) -> &Rational {
        [&self.h, &self.i, &self.j][p]
    }

    /// Relabels variables: slot `k` of the result is original variable
    /// `perm[k]`, i.e. `result(X0, X1, X2) = self` with `x_{perm[k]} = X_k`.
    pub fn permuted(&self, perm: Permutation) -> Quadratic3 {
        let p = perm.0;
        Quadratic3 {
            a: self.cross(p[0], p[1]).clone(),
            b: self.cross(p[0], p[2]).clone(),
            c: self.cross(p[1], p[2]).clone(),
            d: self.square(p[0]).clone(),
            e: self.square(p[1]).clone(),
            g: self.square(p[2]).clone(),
            h: self.linear(p[0]).clone(),
            i: self.linear(p[1]).clone(),
            j: self.linear(p[2]).clone(),
            k0: self.k0.clone(),
        }
    }

    pub fn scaled(&self, s: &Rational) -> Quadratic3 {
        Quadratic3::new(self.coefficients().map(|c| c * s))
    }

    pub fn is_constant(&self) -> bool {
        self.coefficients()[..9].iter().all(Zero::is_zero)
    }

    pub fn eval(&self, x: &Rational, y: &Rational, z: &Rational) -> Rational {
        &self.a * x * y
            + &self.b * x * z
            + &self.c * y * z
            + &self.d * x * x
            + &self.e * y * y
            + &self.g * z * z
            + &self.h * x
            + &self.i * y
            + &self.j * z
            + &self.k0
    }
}

impl fmt::Display for Quadratic3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// Variable relabeling; slot `k` holds original variable `self.0[k]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Permutation(pub [usize; 3]);

impl Permutation {
    pub const IDENTITY: Permutation = Permutation([0, 1, 2]);

    /// All six permutations, identity first, in lexicographic order.
    pub fn all() -> [Permutation; 6] {
        [
            Permutation([0, 1, 2]),
            Permutation([0, 2, 1]),
            Permutation([1, 0, 2]),
            Permutation([1, 2, 0]),
            Permutation([2, 0, 1]),
            Permutation([2, 1, 0]),
        ]
    }

    pub fn names(&self) -> [&'static str; 3] {
        self.0.map(|k| VARS[k])
    }

    pub fn primed_names(&self) -> [&'static str; 3] {
        self.0.map(|k| PRIMED[k])
    }

    pub fn compose(&self, inner: Permutation) -> Permutation {
        Permutation(self.0.map(|k| inner.0[k]))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.names().join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LemmaCase {
    /// `a xy + b xz + r(x) + s(y) + t(z)` with `a ≠ 0` after relabeling.
    TwoCrossTerms,
    /// All three cross coefficients nonzero.
    AllCrossTerms,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegenerateWitness {
    /// `f` is already `H(x) + K(y) + L(z)`.
    Additive,
    /// `f = α w² + β w + γ` with `w = inner[0] x + inner[1] y + inner[2] z`.
    Square {
        alpha: Rational,
        beta: Rational,
        gamma: Rational,
        inner: [Rational; 3],
    },
}

impl DegenerateWitness {
    pub fn expand(&self) -> Option<MPoly> {
        match self {
            DegenerateWitness::Additive => None,
            DegenerateWitness::Square {
                alpha,
                beta,
                gamma,
                inner,
            } => {
                let w = MPoly::from_terms(
                    &VARS,
                    [
                        (vec![1, 0, 0], inner[0].clone()),
                        (vec![0, 1, 0], inner[1].clone()),
                        (vec![0, 0, 1], inner[2].clone()),
                    ],
                )
                .expect("fixed variables");
                Some(
                    &(&w.pow(2).scale(alpha) + &w.scale(beta)) + &MPoly::constant(gamma.clone()),
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Flags are `true` for variables the polynomial does not depend on.
    MissingVariable([bool; 3]),
    DegenerateAdditive,
    DegenerateSquare(DegenerateWitness),
    /// `permutation` relabels `f` into the reduction shape: for
    /// [`LemmaCase::TwoCrossTerms`] the xy slot is nonzero and the yz slot is
    /// zero; for [`LemmaCase::AllCrossTerms`] it is the first relabeling under
    /// which `ib = ja` and `4eg = c²` do not both hold (identity if none).
    FalconerType {
        case: LemmaCase,
        permutation: Permutation,
    },
}

impl Classification {
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Classification::DegenerateAdditive | Classification::DegenerateSquare(_)
        )
    }

    pub fn is_falconer_type(&self) -> bool {
        matches!(self, Classification::FalconerType { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Classification::MissingVariable(_) => "MissingVariable",
            Classification::DegenerateAdditive => "DegenerateAdditive",
            Classification::DegenerateSquare(_) => "DegenerateSquare",
            Classification::FalconerType { .. } => "FalconerType",
        }
    }
}

/// `true` for each variable whose partial derivative is not identically zero.
pub fn depends_on_all(f: &Quadratic3) -> [bool; 3] {
    [0, 1, 2].map(|k| {
        let others = [0, 1, 2].into_iter().filter(|&o| o != k);
        !(f.square(k).is_zero()
            && f.linear(k).is_zero()
            && others.map(|o| f.cross(k, o)).all(Zero::is_zero))
    })
}

fn two(x: &Rational) -> Rational {
    x * rational::int(2)
}

fn four(x: &Rational) -> Rational {
    x * rational::int(4)
}

/// Whether `ib = ja` and `4eg = c²` both hold in this labeling.
pub(crate) fn yz_conditions_hold(q: &Quadratic3) -> bool {
    &q.i * &q.b == &q.j * &q.a && four(&(&q.e * &q.g)) == &q.c * &q.c
}

pub fn classify(f: &Quadratic3) -> Result<Classification> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let deps = depends_on_all(f);
    if deps.contains(&false) {
        return Ok(Classification::MissingVariable(deps.map(|d| !d)));
    }
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
        k0,
    } = f;
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Ok(Classification::DegenerateAdditive);
    }
    let all_cross = !a.is_zero() && !b.is_zero() && !c.is_zero();
    if all_cross {
        let square_conditions = four(&(d * e)) == a * a
            && four(&(d * g)) == b * b
            && four(&(e * g)) == c * c
            && two(&(d * c)) == a * b;
        let linear_conditions = h * c == j * a && j * a == i * b;
        if square_conditions && linear_conditions {
            let two_d = two(d);
            return Ok(Classification::DegenerateSquare(DegenerateWitness::Square {
                alpha: d.clone(),
                beta: h.clone(),
                gamma: k0.clone(),
                inner: [Rational::one(), a / &two_d, b / &two_d],
            }));
        }
        let permutation = Permutation::all()
            .into_iter()
            .find(|&p| !yz_conditions_hold(&f.permuted(p)))
            .unwrap_or(Permutation::IDENTITY);
        return Ok(Classification::FalconerType {
            case: LemmaCase::AllCrossTerms,
            permutation,
        });
    }
    let permutation = Permutation::all()
        .into_iter()
        .find(|&p| {
            let q = f.permuted(p);
            !q.a.is_zero() && q.c.is_zero()
        })
        .expect("a zero and a nonzero cross term always admit such a relabeling");
    Ok(Classification::FalconerType {
        case: LemmaCase::TwoCrossTerms,
        permutation,
    })
}

/// Exact polynomial comparison of the witness expansion with `f`.
pub fn verify_witness(f: &Quadratic3, w: &DegenerateWitness) -> bool {
    match w {
        DegenerateWitness::Additive => {
            f.a.is_zero() && f.b.is_zero() && f.c.is_zero()
        }
        DegenerateWitness::Square { .. } => w.expand().as_ref() == Some(&f.to_poly()),
    }
}

/// Independent degeneracy check: solves for a witness from the `x²`, `xy`,
/// `xz` and `x` slots (normalizing `h₁ = 1`) and then compares every
/// coefficient by re-expanding the candidate, with no shortcut identities.
pub fn oracle_is_degenerate(f: &Quadratic3) -> bool {
    if f.a.is_zero() && f.b.is_zero() && f.c.is_zero() {
        return true;
    }
    if f.a.is_zero() || f.b.is_zero() || f.c.is_zero() {
        return false;
    }
    // With h₁ = 1: x² slot gives α, xy and xz give k₁, l₁, x gives β.
    let alpha = f.d.clone();
    if alpha.is_zero() {
        return false;
    }
    let k1 = &f.a / two(&alpha);
    let l1 = &f.b / two(&alpha);
    let candidate = DegenerateWitness::Square {
        alpha,
        beta: f.h.clone(),
        gamma: f.k0.clone(),
        inner: [Rational::one(), k1, l1],
    };
    candidate.expand().expect("square witness") == f.to_poly()
}
