//! Sparse multivariate polynomials over the rationals.
//!
//! A polynomial carries its own variable universe (sorted by name) and a map
//! from exponent vectors to nonzero coefficients. Binary operations align the
//! universes by name first, so `x + y` and `y + z` can be added directly.
//! Terms are kept in graded lexicographic order, which is also the order used
//! by the canonical string form.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Exponent vector aligned with the owning polynomial's variable list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(Vec::new()), c);
        }
        MPoly {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rational::int(n))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![1]), Rational::one());
        MPoly {
            vars: vec![name.to_string()],
            terms,
        }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs aligned with
    /// `vars`. Duplicate monomials are summed and zero coefficients dropped.
    pub fn from_terms<S: AsRef<str>>(
        vars: &[S],
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Result<Self> {
        let names: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let universe: BTreeSet<&String> = names.iter().collect();
        if universe.len() != names.len() {
            return Err(Error::InvalidInput("duplicate variable name".into()));
        }
        let sorted: Vec<String> = universe.into_iter().cloned().collect();
        let position: Vec<usize> = names
            .iter()
            .map(|n| sorted.binary_search(n).unwrap())
            .collect();
        let mut out = MPoly {
            vars: sorted,
            terms: BTreeMap::new(),
        };
        for (exps, c) in terms {
            if exps.len() != names.len() {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of length {} for {} variables",
                    exps.len(),
                    names.len()
                )));
            }
            let mut m = vec![0; names.len()];
            for (k, e) in exps.into_iter().enumerate() {
                m[position[k]] = e;
            }
            out.add_term(Monomial(m), c);
        }
        Ok(out)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Variables that occur with a positive exponent in some term.
    pub fn used_vars(&self) -> Vec<String> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(k, _)| self.terms.keys().any(|m| m.0[*k] > 0))
            .map(|(_, v)| v.clone())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Coefficient of the monomial given as `(variable, exponent)` pairs;
    /// variables not listed have exponent zero.
    pub fn coefficient(&self, powers: &[(&str, u32)]) -> Rational {
        let mut m = vec![0u32; self.vars.len()];
        for (name, e) in powers {
            match self.vars.binary_search_by(|v| v.as_str().cmp(name)) {
                Ok(k) => m[k] += e,
                Err(_) if *e == 0 => {}
                Err(_) => return Rational::zero(),
            }
        }
        self.terms
            .get(&Monomial(m))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-expresses `self` over `vars`, which must be a sorted superset of
    /// the current universe.
    fn aligned(&self, vars: &[String]) -> MPoly {
        if self.vars == vars {
            return self.clone();
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.binary_search(v).expect("universe is not a superset"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; vars.len()];
                for (k, &pos) in map.iter().enumerate() {
                    e[pos] = m.0[k];
                }
                (Monomial(e), c.clone())
            })
            .collect();
        MPoly {
            vars: vars.to_vec(),
            terms,
        }
    }

    fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
        if a == b {
            return a.to_vec();
        }
        let set: BTreeSet<&String> = a.iter().chain(b).collect();
        set.into_iter().cloned().collect()
    }

    /// Widens the universe to include `names`.
    pub fn with_vars<S: AsRef<str>>(&self, names: &[S]) -> MPoly {
        let extra: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut extra_sorted = extra;
        extra_sorted.sort();
        extra_sorted.dedup();
        self.aligned(&Self::union_vars(&self.vars, &extra_sorted))
    }

    /// Drops variables that do not occur in any term.
    pub fn trimmed(&self) -> MPoly {
        let used = self.used_vars();
        if used.len() == self.vars.len() {
            return self.clone();
        }
        let keep: Vec<usize> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(_, v)| used.contains(v))
            .map(|(k, _)| k)
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (Monomial(keep.iter().map(|&k| m.0[k]).collect()), c.clone()))
            .collect();
        MPoly { vars: used, terms }
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one().aligned(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial_derivative(&self, var: &str) -> Result<MPoly> {
        let k = self
            .vars
            .binary_search_by(|v| v.as_str().cmp(var))
            .map_err(|_| Error::UnknownVariable(var.to_string()))?;
        let mut out = MPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            let e = m.0[k];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[k] -= 1;
            out.add_term(dm, c * rational::int(e as i64));
        }
        Ok(out)
    }

    /// Replaces each bound variable by its polynomial. Unbound variables pass
    /// through unchanged; bindings for variables outside the universe are
    /// ignored.
    pub fn substitute(&self, bindings: &BTreeMap<String, MPoly>) -> MPoly {
        let mut universe: BTreeSet<String> = BTreeSet::new();
        for v in &self.vars {
            match bindings.get(v) {
                Some(p) => universe.extend(p.vars.iter().cloned()),
                None => {
                    universe.insert(v.clone());
                }
            }
        }
        let universe: Vec<String> = universe.into_iter().collect();
        let images: Vec<MPoly> = self
            .vars
            .iter()
            .map(|v| match bindings.get(v) {
                Some(p) => p.aligned(&universe),
                None => MPoly::var(v).aligned(&universe),
            })
            .collect();
        let mut power_cache: Vec<Vec<MPoly>> = images
            .iter()
            .map(|p| vec![MPoly::one().aligned(&universe), p.clone()])
            .collect();
        let mut out = MPoly::zero().aligned(&universe);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(c.clone()).aligned(&universe);
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut power_cache[k];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &images[k];
                    cache.push(next);
                }
                t = &t * &cache[e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Evaluates at a point; every variable in the universe must be bound.
    pub fn eval(&self, point: &BTreeMap<String, Rational>) -> Result<Rational> {
        let values: Vec<&Rational> = self
            .vars
            .iter()
            .map(|v| point.get(v).ok_or_else(|| Error::UnknownVariable(v.clone())))
            .collect::<Result<_>>()?;
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(values[k].clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        if divisor.is_zero() {
            return None;
        }
        let vars = Self::union_vars(&self.vars, &divisor.vars);
        let mut rem = self.aligned(&vars);
        let d = divisor.aligned(&vars);
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut quot = MPoly::zero().aligned(&vars);
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&rm) {
                return None;
            }
            let qm = rm.div(&dm);
            let qc = rc / &dc;
            let mut step = MPoly::zero().aligned(&vars);
            step.add_term(qm, qc);
            rem = &rem - &(&step * &d);
            quot = &quot + &step;
        }
        Some(quot)
    }

    fn binary(&self, other: &MPoly, negate: bool) -> MPoly {
        let vars = Self::union_vars(&self.vars, &other.vars);
        let mut out = self.aligned(&vars);
        let rhs = other.aligned(&vars);
        for (m, c) in rhs.terms {
            out.add_term(m, if negate { -c } else { c });
        }
        out
    }

    fn product(&self, other: &MPoly) -> MPoly {
        let vars = Self::union_vars(&self.vars, &other.vars);
        let a = self.aligned(&vars);
        let b = other.aligned(&vars);
        let mut out = MPoly {
            vars,
            terms: BTreeMap::new(),
        };
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let a = self.trimmed();
        let b = other.trimmed();
        a.vars == b.vars && a.terms == b.terms
    }
}

impl Eq for MPoly {}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.binary(rhs, false)
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.binary(rhs, true)
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.product(rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &MPoly) -> MPoly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<MPoly> for &'a MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl From<Rational> for MPoly {
    fn from(c: Rational) -> Self {
        MPoly::constant(c)
    }
}

/// Canonical form: terms in descending graded-lex order, `*` between factors,
/// `^` for powers, `0` for the zero polynomial. Example: `x^2 - 3/2*x*y + 1`.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if m.degree() == 0 || !abs.is_one() {
                factors.push(rational::format(&abs));
            }
            for (k, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[k].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[k], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for MPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_poly(s)
    }
}
