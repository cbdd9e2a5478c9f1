//! Brute-force image sets over prime fields.
//!
//! `image_set` enumerates `A × B × C` with a `p`-bit bitmap (hash-set fallback
//! for huge `p`); `expander_census` draws seeded random families and records
//! `|f(A, B, C)| / min(N^{3/2}, p)`; `cover_check_distance` decides whether
//! `(x − y)² + (z − t)²` covers the field.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Roots;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadratic::Quadratic3;
use crate::rational::Rational;

pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// Largest modulus for which the image is tracked in a dense bitmap.
const BITMAP_LIMIT: u64 = 1 << 28;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        (a != 0).then(|| pow_mod(a, self.p - 2, self.p))
    }

    pub fn reduce(&self, r: &Rational) -> Result<u64> {
        let p = self.p;
        let residue = |n: &num_bigint::BigInt| -> u64 {
            let m = n % p;
            let m = if m.is_negative() { m + p } else { m };
            m.to_u64().expect("residue below p")
        };
        let num = residue(r.numer());
        let den = residue(r.denom());
        let inv = self
            .inv(den)
            .ok_or_else(|| Error::NotInvertible(crate::rational::format(r), p))?;
        Ok(mul_mod(num, inv, p))
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(&self) -> u64 {
        let p = self.p;
        if p == 2 {
            return 1;
        }
        let mut factors = Vec::new();
        let mut m = p - 1;
        let mut q = 2;
        while q * q <= m {
            if m % q == 0 {
                factors.push(q);
                while m % q == 0 {
                    m /= q;
                }
            }
            q += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        (2..p)
            .find(|&g| factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1))
            .expect("prime fields have primitive roots")
    }
}

/// Sorted, duplicate-free residues below `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FFSet {
    elems: Vec<u64>,
}

impl FFSet {
    pub fn new(mut elems: Vec<u64>, field: &PrimeField) -> Result<Self> {
        if let Some(&bad) = elems.iter().find(|&&e| e >= field.p) {
            return Err(Error::InvalidInput(format!(
                "{bad} is not a residue modulo {}",
                field.p
            )));
        }
        elems.sort_unstable();
        elems.dedup();
        Ok(FFSet { elems })
    }

    pub fn full(field: &PrimeField) -> Self {
        FFSet {
            elems: (0..field.p).collect(),
        }
    }

    pub fn range(start: u64, len: u64, field: &PrimeField) -> Result<Self> {
        Self::new((start..start + len).map(|k| k % field.p).collect(), field)
    }

    pub fn elements(&self) -> &[u64] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &FFSet) -> bool {
        self.elems.iter().all(|&x| other.contains(x))
    }
}

/// A quadratic with coefficients reduced modulo `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticModP {
    field: PrimeField,
    /// a, b, c, d, e, g, h, i, j, k0
    coeffs: [u64; 10],
}

impl QuadraticModP {
    pub fn new(f: &Quadratic3, field: &PrimeField) -> Result<Self> {
        let c = f.coefficients();
        let mut coeffs = [0u64; 10];
        for (slot, r) in coeffs.iter_mut().zip(c.iter()) {
            *slot = field.reduce(r)?;
        }
        Ok(QuadraticModP {
            field: *field,
            coeffs,
        })
    }

    pub fn eval(&self, x: u64, y: u64, z: u64) -> u64 {
        let p = self.field.p;
        let [a, b, c, d, e, g, h, i, j, k0] = self.coeffs;
        let m = |u: u64, v: u64| mul_mod(u, v, p);
        let terms = [
            m(a, m(x, y)),
            m(b, m(x, z)),
            m(c, m(y, z)),
            m(d, m(x, x)),
            m(e, m(y, y)),
            m(g, m(z, z)),
            m(h, x),
            m(i, y),
            m(j, z),
            k0,
        ];
        terms.iter().fold(0u64, |acc, &t| ((acc as u128 + t as u128) % p as u128) as u64)
    }
}

enum Accumulator {
    Bits(Vec<u64>),
    Set(BTreeSet<u64>),
}

impl Accumulator {
    fn new(p: u64) -> Self {
        if p <= BITMAP_LIMIT {
            Accumulator::Bits(vec![0; (p as usize).div_ceil(64)])
        } else {
            Accumulator::Set(BTreeSet::new())
        }
    }

    #[inline]
    fn insert(&mut self, v: u64) {
        match self {
            Accumulator::Bits(b) => b[(v >> 6) as usize] |= 1 << (v & 63),
            Accumulator::Set(s) => {
                s.insert(v);
            }
        }
    }

    fn merge(self, other: Self) -> Self {
        match (self, other) {
            (Accumulator::Bits(mut a), Accumulator::Bits(b)) => {
                a.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
                Accumulator::Bits(a)
            }
            (Accumulator::Set(mut a), Accumulator::Set(b)) => {
                a.extend(b);
                Accumulator::Set(a)
            }
            _ => unreachable!("accumulators for one field share a representation"),
        }
    }

    fn into_sorted(self) -> Vec<u64> {
        match self {
            Accumulator::Bits(b) => b
                .iter()
                .enumerate()
                .flat_map(|(w, &word)| {
                    (0..64).filter(move |k| word >> k & 1 == 1).map(move |k| (w * 64 + k) as u64)
                })
                .collect(),
            Accumulator::Set(s) => s.into_iter().collect(),
        }
    }
}

fn check_budget(required: u128, budget: u128) -> Result<()> {
    if required > budget {
        Err(Error::BudgetExceeded { required, budget })
    } else {
        Ok(())
    }
}

/// `{ f(x, y, z) mod p : (x, y, z) ∈ A × B × C }`.
pub fn image_set(
    f: &Quadratic3,
    a: &FFSet,
    b: &FFSet,
    c: &FFSet,
    field: &PrimeField,
    budget: u128,
) -> Result<FFSet> {
    let fp = QuadraticModP::new(f, field)?;
    image_set_mod_p(&fp, a, b, c, budget)
}

pub fn image_set_mod_p(
    f: &QuadraticModP,
    a: &FFSet,
    b: &FFSet,
    c: &FFSet,
    budget: u128,
) -> Result<FFSet> {
    let required = a.len() as u128 * b.len() as u128 * c.len() as u128;
    check_budget(required, budget)?;
    let p = f.field.p;
    for s in [a, b, c] {
        if s.elems.last().is_some_and(|&m| m >= p) {
            return Err(Error::InvalidInput("set element outside the field".into()));
        }
    }
    let [ca, cb, cc, cd, ce, cg, ch, ci, cj, k0] = f.coeffs;
    // f = [a xy + d x² + e y² + h x + i y + k0] + z (b x + c y) + [g z² + j z]
    let tz: Vec<u64> = c
        .elems
        .iter()
        .map(|&z| (mul_mod(cg, mul_mod(z, z, p), p) + mul_mod(cj, z, p)) % p)
        .collect();
    let small = p < (1 << 32);
    let chunk = (a.len() / (rayon::current_num_threads() * 4)).max(1);
    let acc = a
        .elems
        .par_chunks(chunk)
        .map(|xs| {
            let mut acc = Accumulator::new(p);
            for &x in xs {
                let xpart = (mul_mod(cd, mul_mod(x, x, p), p) + mul_mod(ch, x, p) + k0) % p;
                let bx = mul_mod(cb, x, p);
                for &y in &b.elems {
                    let base = (xpart
                        + mul_mod(ca, mul_mod(x, y, p), p)
                        + mul_mod(ce, mul_mod(y, y, p), p)
                        + mul_mod(ci, y, p))
                        % p;
                    let lin = (bx + mul_mod(cc, y, p)) % p;
                    if small {
                        for (&z, &t) in c.elems.iter().zip(&tz) {
                            acc.insert((base + (z * lin) % p + t) % p);
                        }
                    } else {
                        for (&z, &t) in c.elems.iter().zip(&tz) {
                            let v = (base as u128 + mul_mod(z, lin, p) as u128 + t as u128)
                                % p as u128;
                            acc.insert(v as u64);
                        }
                    }
                }
            }
            acc
        })
        .reduce(|| Accumulator::new(p), Accumulator::merge);
    Ok(FFSet {
        elems: acc.into_sorted(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetFamily {
    /// `N` distinct residues drawn uniformly by rejection sampling.
    UniformRandom,
    /// `{s, s+1, …, s+N−1}` modulo `p` with a random start `s`.
    Interval,
    /// `{g^s, g^{s+1}, …, g^{s+N−1}}` for the smallest primitive root `g`.
    Geometric,
}

impl SetFamily {
    pub fn name(&self) -> &'static str {
        match self {
            SetFamily::UniformRandom => "uniform-random",
            SetFamily::Interval => "interval",
            SetFamily::Geometric => "geometric",
        }
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SetFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-random" | "uniform" | "random" => Ok(SetFamily::UniformRandom),
            "interval" => Ok(SetFamily::Interval),
            "geometric" => Ok(SetFamily::Geometric),
            _ => Err(Error::InvalidInput(format!(
                "unknown set family `{s}` (uniform-random, interval, geometric)"
            ))),
        }
    }
}

/// Per-trial generator: the census seed picks the key, the trial index the
/// stream, so a trial's sets do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn draw_set(
    family: SetFamily,
    field: &PrimeField,
    n: u64,
    rng: &mut ChaCha8Rng,
) -> Result<FFSet> {
    let p = field.p;
    if n > p {
        return Err(Error::InvalidInput(format!("N = {n} exceeds p = {p}")));
    }
    match family {
        SetFamily::UniformRandom => {
            let mut chosen = BTreeSet::new();
            while (chosen.len() as u64) < n {
                chosen.insert(rng.random_range(0..p));
            }
            Ok(FFSet {
                elems: chosen.into_iter().collect(),
            })
        }
        SetFamily::Interval => {
            let start = rng.random_range(0..p);
            FFSet::range(start, n, field)
        }
        SetFamily::Geometric => {
            if n > p - 1 {
                return Err(Error::InvalidInput(format!(
                    "geometric family has at most p - 1 = {} elements",
                    p - 1
                )));
            }
            let g = field.primitive_root();
            let mut cur = pow_mod(g, rng.random_range(0..p - 1), p);
            let mut elems = Vec::with_capacity(n as usize);
            for _ in 0..n {
                elems.push(cur);
                cur = mul_mod(cur, g, p);
            }
            FFSet::new(elems, field)
        }
    }
}

/// `min(N^{3/2}, p)`, kept exact when it is an integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthBound {
    Integer(u64),
    /// `N^{3/2}` for a non-square `N` (irrational).
    PowerThreeHalves(u64),
}

impl GrowthBound {
    pub fn new(n: u64, p: u64) -> Self {
        let n3 = (n as u128).pow(3);
        let p2 = (p as u128).pow(2);
        if n3 >= p2 {
            return GrowthBound::Integer(p);
        }
        let r = n.sqrt();
        if r * r == n {
            GrowthBound::Integer(r * r * r)
        } else {
            GrowthBound::PowerThreeHalves(n)
        }
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            GrowthBound::Integer(b) => b as f64,
            GrowthBound::PowerThreeHalves(n) => (n as f64).powf(1.5),
        }
    }

    /// `size / bound` as an exact string: `p/q` when the bound is an
    /// integer, `size/N^(3/2)` otherwise.
    pub fn ratio_exact(&self, size: u64) -> String {
        match *self {
            GrowthBound::Integer(b) => {
                crate::rational::format(&Rational::new(size.into(), b.into()))
            }
            GrowthBound::PowerThreeHalves(n) => format!("{size}/{n}^(3/2)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub p: u64,
    pub n: u64,
    pub family: SetFamily,
    pub seed: u64,
    pub trial: u64,
    pub image_size: u64,
    pub bound: GrowthBound,
}

impl CensusRow {
    pub fn ratio(&self) -> f64 {
        self.image_size as f64 / self.bound.to_f64()
    }

    pub fn ratio_exact(&self) -> String {
        self.bound.ratio_exact(self.image_size)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    /// Sorted by ratio, ties by trial index.
    pub rows: Vec<CensusRow>,
}

pub const CENSUS_HEADER: &str = "p,N,family,seed,trial,image_size,ratio,ratio_float";

impl CensusReport {
    pub fn min_ratio(&self) -> Option<f64> {
        self.rows.first().map(CensusRow::ratio)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CENSUS_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{:.6}\n",
                r.p,
                r.n,
                r.family,
                r.seed,
                r.trial,
                r.image_size,
                r.ratio_exact(),
                r.ratio()
            ));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub n: u64,
    pub trials: u64,
    pub family: SetFamily,
    pub seed: u64,
    pub budget: u128,
}

pub fn expander_census(
    f: &Quadratic3,
    field: &PrimeField,
    cfg: &CensusConfig,
) -> Result<CensusReport> {
    let p = field.p;
    if cfg.n > p {
        return Err(Error::InvalidInput(format!("N = {} exceeds p = {p}", cfg.n)));
    }
    if cfg.trials == 0 {
        return Err(Error::InvalidInput("at least one trial is required".into()));
    }
    let fp = QuadraticModP::new(f, field)?;
    let bound = GrowthBound::new(cfg.n, p);
    let mut rows = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            let a = draw_set(cfg.family, field, cfg.n, &mut rng)?;
            let b = draw_set(cfg.family, field, cfg.n, &mut rng)?;
            let c = draw_set(cfg.family, field, cfg.n, &mut rng)?;
            let img = image_set_mod_p(&fp, &a, &b, &c, cfg.budget)?;
            Ok(CensusRow {
                p,
                n: cfg.n,
                family: cfg.family,
                seed: cfg.seed,
                trial,
                image_size: img.len() as u64,
                bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.image_size, r.trial));
    Ok(CensusReport { rows })
}

/// `{(x − y)² + (z − t)² : x, y, z, t ∈ A}` via the set of square
/// differences followed by a sumset, `O(|A|² + |S|²)` work.
pub fn distance_image(a: &FFSet, field: &PrimeField, budget: u128) -> Result<FFSet> {
    let p = field.p;
    let n = a.len() as u128;
    check_budget(n * n, budget)?;
    let mut squares = Accumulator::new(p);
    for &x in &a.elems {
        for &y in &a.elems {
            let d = (x + p - y) % p;
            squares.insert(mul_mod(d, d, p));
        }
    }
    let squares = squares.into_sorted();
    let s = squares.len() as u128;
    check_budget(n * n + s * s, budget)?;
    let mut sums = Accumulator::new(p);
    for &u in &squares {
        for &v in &squares {
            sums.insert(((u as u128 + v as u128) % p as u128) as u64);
        }
    }
    Ok(FFSet {
        elems: sums.into_sorted(),
    })
}

pub fn cover_check_distance(a: &FFSet, field: &PrimeField, budget: u128) -> Result<bool> {
    Ok(distance_image(a, field, budget)?.len() as u64 == field.p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn q(s: &str) -> Quadratic3 {
        Quadratic3::parse(s).unwrap()
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert!(is_prime(18_446_744_073_709_551_557));
        assert_eq!(PrimeField::new(1001), Err(Error::NotPrime(1001)));
    }

    #[test]
    fn full_field_is_covered() {
        let f = f7();
        let all = FFSet::full(&f);
        let img = image_set(&q("x*y + z"), &all, &all, &all, &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(img.len(), 7);
    }

    #[test]
    fn small_sets_in_f7() {
        let f = f7();
        let s = FFSet::new(vec![1, 2], &f).unwrap();
        let img = image_set(&q("x*y + z"), &s, &s, &s, &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(img.elements(), &[2, 3, 4, 5, 6]);
    }

    #[test]
    fn squares_of_small_sums() {
        let f = PrimeField::new(101).unwrap();
        let s = FFSet::new(vec![0, 1, 2], &f).unwrap();
        let img = image_set(&q("(x+y+z)^2"), &s, &s, &s, &f, DEFAULT_BUDGET).unwrap();
        assert_eq!(img.elements(), &[0, 1, 4, 9, 16, 25, 36]);
    }

    #[test]
    fn budget_is_enforced() {
        let f = PrimeField::new(101).unwrap();
        let all = FFSet::full(&f);
        match image_set(&q("x*y+z"), &all, &all, &all, &f, 1000) {
            Err(Error::BudgetExceeded { required, budget }) => {
                assert_eq!((required, budget), (101 * 101 * 101, 1000));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rational_coefficients_reduce() {
        let f = f7();
        assert_eq!(f.reduce(&crate::rational::frac(1, 2)).unwrap(), 4);
        assert_eq!(f.reduce(&crate::rational::int(-1)).unwrap(), 6);
        assert!(matches!(
            f.reduce(&crate::rational::frac(1, 7)),
            Err(Error::NotInvertible(..))
        ));
    }

    #[test]
    fn census_on_full_field() {
        let f = PrimeField::new(101).unwrap();
        let cfg = CensusConfig {
            n: 101,
            trials: 1,
            family: SetFamily::Interval,
            seed: 0,
            budget: DEFAULT_BUDGET,
        };
        let rep = expander_census(&q("x*y + z"), &f, &cfg).unwrap();
        assert_eq!(rep.rows[0].image_size, 101);
        assert_eq!(rep.rows[0].ratio_exact(), "1");
        assert_eq!(rep.min_ratio(), Some(1.0));
    }

    #[test]
    fn census_rejects_oversized_sets() {
        let f = PrimeField::new(11).unwrap();
        let cfg = CensusConfig {
            n: 12,
            trials: 1,
            family: SetFamily::UniformRandom,
            seed: 0,
            budget: DEFAULT_BUDGET,
        };
        assert!(expander_census(&q("x*y + z"), &f, &cfg).is_err());
    }

    #[test]
    fn growth_bound_forms() {
        assert_eq!(GrowthBound::new(127, 1009), GrowthBound::Integer(1009));
        assert_eq!(GrowthBound::new(16, 1009), GrowthBound::Integer(64));
        assert_eq!(GrowthBound::new(10, 1009), GrowthBound::PowerThreeHalves(10));
        assert_eq!(GrowthBound::new(10, 1009).ratio_exact(20), "20/10^(3/2)");
    }

    #[test]
    fn geometric_family_is_a_coset_of_powers() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(f.primitive_root(), 2);
        let mut rng = trial_rng(3, 0);
        let s = draw_set(SetFamily::Geometric, &f, 10, &mut rng).unwrap();
        assert_eq!(s.len(), 10);
        assert!(!s.contains(0));
        assert!(draw_set(SetFamily::Geometric, &f, 101, &mut rng).is_err());
    }

    fn brute_distance(a: &FFSet, p: u64) -> FFSet {
        let mut out = BTreeSet::new();
        for &x in a.elements() {
            for &y in a.elements() {
                for &z in a.elements() {
                    for &t in a.elements() {
                        let d1 = (x + p - y) % p;
                        let d2 = (z + p - t) % p;
                        out.insert((d1 * d1 + d2 * d2) % p);
                    }
                }
            }
        }
        FFSet {
            elems: out.into_iter().collect(),
        }
    }

    #[test]
    fn distance_cover_small_cases() {
        let f = PrimeField::new(101).unwrap();
        assert!(cover_check_distance(&FFSet::full(&f), &f, DEFAULT_BUDGET).unwrap());
        let zero = FFSet::new(vec![0], &f).unwrap();
        assert_eq!(distance_image(&zero, &f, DEFAULT_BUDGET).unwrap().elements(), &[0]);
        assert!(!cover_check_distance(&zero, &f, DEFAULT_BUDGET).unwrap());
    }

    proptest! {
        #[test]
        fn distance_image_matches_brute_force(
            elems in prop::collection::vec(0u64..31, 1..8)
        ) {
            let f = PrimeField::new(31).unwrap();
            let a = FFSet::new(elems, &f).unwrap();
            prop_assert_eq!(distance_image(&a, &f, DEFAULT_BUDGET).unwrap(), brute_distance(&a, 31));
        }

        #[test]
        fn image_set_matches_direct_evaluation(
            coeffs in prop::array::uniform10(-3i64..=3),
            a in prop::collection::vec(0u64..13, 1..5),
            b in prop::collection::vec(0u64..13, 1..5),
            c in prop::collection::vec(0u64..13, 1..5),
        ) {
            let field = PrimeField::new(13).unwrap();
            let f = Quadratic3::from_ints(coeffs);
            let fp = QuadraticModP::new(&f, &field).unwrap();
            let (a, b, c) = (
                FFSet::new(a, &field).unwrap(),
                FFSet::new(b, &field).unwrap(),
                FFSet::new(c, &field).unwrap(),
            );
            let mut direct = BTreeSet::new();
            for &x in a.elements() {
                for &y in b.elements() {
                    for &z in c.elements() {
                        direct.insert(fp.eval(x, y, z));
                    }
                }
            }
            let img = image_set(&f, &a, &b, &c, &field, DEFAULT_BUDGET).unwrap();
            let direct: Vec<u64> = direct.into_iter().collect();
            prop_assert_eq!(img.elements(), direct.as_slice());
        }
    }
}
