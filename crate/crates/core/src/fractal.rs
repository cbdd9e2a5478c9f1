//! Cantor covers and exact interval images of quadratics.
//!
//! Box ranges are exact: the extrema of a quadratic on a box are attained at
//! a vertex or at an interior critical point of some face, so every face with
//! a nonsingular restricted Hessian contributes one candidate point. The hot
//! path runs in `Ratio<i128>` with overflow checks and falls back to
//! `BigRational` when a value does not fit.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadratic::Quadratic3;
use crate::rational::{self, Rational};

pub const DEFAULT_BOX_BUDGET: u128 = 100_000_000;

/// Largest cover materialized by [`cantor_cover`].
const MAX_COVER_INTERVALS: u128 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorSpec {
    base: u32,
    digits: Vec<u32>,
    depth: u32,
}

impl CantorSpec {
    pub fn new(base: u32, digits: &[u32], depth: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidInput(format!("base must be at least 2, got {base}")));
        }
        if digits.is_empty() {
            return Err(Error::InvalidInput("digit set is empty".into()));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidInput(format!("digit {d} is not below base {base}")));
        }
        let mut digits = digits.to_vec();
        digits.sort_unstable();
        digits.dedup();
        Ok(CantorSpec { base, digits, depth })
    }

    /// Middle-thirds set at the given depth.
    pub fn middle_thirds(depth: u32) -> Self {
        CantorSpec::new(3, &[0, 2], depth).expect("valid digits")
    }

    /// `[0, 1]` split into `2^depth` pieces.
    pub fn full_binary(depth: u32) -> Self {
        CantorSpec::new(2, &[0, 1], depth).expect("valid digits")
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn with_depth(&self, depth: u32) -> Self {
        CantorSpec { depth, ..self.clone() }
    }

    /// `log|D| / log b`; irrational in general.
    pub fn dimension(&self) -> f64 {
        (self.digits.len() as f64).ln() / (self.base as f64).ln()
    }

    /// `(|D| / b)^n`.
    pub fn total_length(&self) -> Rational {
        num_traits::pow(
            Rational::new(BigInt::from(self.digits.len()), BigInt::from(self.base)),
            self.depth as usize,
        )
    }

    pub fn interval_count(&self) -> u128 {
        (self.digits.len() as u128)
            .checked_pow(self.depth)
            .unwrap_or(u128::MAX)
    }
}

/// Closed intervals with disjoint interiors, sorted, and a uniform weight
/// per interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalCover {
    intervals: Vec<(Rational, Rational)>,
    weight: Option<Rational>,
}

impl IntervalCover {
    pub fn new(intervals: Vec<(Rational, Rational)>, weighted: bool) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidInput("cover has no intervals".into()));
        }
        for (lo, hi) in &intervals {
            if lo > hi {
                return Err(Error::InvalidInput(format!(
                    "interval [{}, {}] is reversed",
                    rational::format(lo),
                    rational::format(hi)
                )));
            }
        }
        for w in intervals.windows(2) {
            if w[0].1 > w[1].0 {
                return Err(Error::InvalidInput(
                    "intervals must be sorted with disjoint interiors".into(),
                ));
            }
        }
        let weight = weighted.then(|| Rational::new(BigInt::one(), BigInt::from(intervals.len())));
        Ok(IntervalCover { intervals, weight })
    }

    pub fn point(r: Rational) -> Self {
        IntervalCover {
            intervals: vec![(r.clone(), r)],
            weight: Some(Rational::one()),
        }
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(vec![(lo, hi)], true)
    }

    pub fn unit() -> Self {
        Self::interval(Rational::zero(), Rational::one()).expect("0 <= 1")
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn weight(&self) -> Option<&Rational> {
        self.weight.as_ref()
    }

    /// Weight per interval, `1/len` when the cover is unweighted.
    pub fn weight_or_uniform(&self) -> Rational {
        self.weight
            .clone()
            .unwrap_or_else(|| Rational::new(BigInt::one(), BigInt::from(self.len())))
    }

    pub fn total_length(&self) -> Rational {
        self.intervals
            .iter()
            .fold(Rational::zero(), |acc, (lo, hi)| acc + (hi - lo))
    }

    /// Every interval of `self` lies inside some interval of `other`.
    pub fn is_refinement_of(&self, other: &IntervalCover) -> bool {
        self.intervals.iter().all(|(lo, hi)| {
            other
                .intervals
                .iter()
                .any(|(olo, ohi)| olo <= lo && hi <= ohi)
        })
    }
}

pub fn cantor_cover(spec: &CantorSpec) -> Result<IntervalCover> {
    let count = spec.interval_count();
    if count > MAX_COVER_INTERVALS {
        return Err(Error::BudgetExceeded {
            required: count,
            budget: MAX_COVER_INTERVALS,
        });
    }
    let b = BigInt::from(spec.base);
    let denom = num_traits::pow(b.clone(), spec.depth as usize);
    // left endpoints as integers over b^depth, built digit by digit
    let mut lefts = vec![BigInt::zero()];
    let b = &b;
    for _ in 0..spec.depth {
        lefts = lefts
            .iter()
            .flat_map(|l| spec.digits.iter().map(move |&d| l * b + BigInt::from(d)))
            .collect();
    }
    let intervals = lefts
        .into_iter()
        .map(|l| {
            let hi = Rational::new(&l + 1, denom.clone());
            (Rational::new(l, denom.clone()), hi)
        })
        .collect();
    IntervalCover::new(intervals, true)
}

/// Parses `cantor:<base>:<digits>`, `point:<r>`, `interval:<lo>:<hi>` or
/// `unit`; Cantor covers are built at `depth`.
pub fn parse_cover(spec: &str, depth: u32) -> Result<IntervalCover> {
    let bad = || {
        Error::InvalidInput(format!(
            "bad cover `{spec}`; expected cantor:<base>:<digits>, point:<r>, interval:<lo>:<hi> or unit"
        ))
    };
    let parts: Vec<&str> = spec.trim().split(':').collect();
    match parts.as_slice() {
        ["unit"] => Ok(IntervalCover::unit()),
        ["point", r] => Ok(IntervalCover::point(rational::parse(r)?)),
        ["interval", lo, hi] => IntervalCover::interval(rational::parse(lo)?, rational::parse(hi)?),
        ["cantor", base, digits] => {
            let base: u32 = base.trim().parse().map_err(|_| bad())?;
            let digits = digits
                .split(',')
                .map(|d| d.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            cantor_cover(&CantorSpec::new(base, &digits, depth)?)
        }
        _ => Err(bad()),
    }
}

/// Arithmetic used by the box-range kernel.
trait Exact: Clone + PartialOrd + Send + Sync {
    fn from_rational(r: &Rational) -> Option<Self>;
    fn to_rational(&self) -> Rational;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
}

type Small = Ratio<i128>;

impl Exact for Small {
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(Ratio::new_raw(r.numer().to_i128()?, r.denom().to_i128()?))
    }
    fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn neg(&self) -> Option<Self> {
        Some(Ratio::new_raw(self.numer().checked_neg()?, *self.denom()))
    }
}

impl Exact for Rational {
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(r.clone())
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
}

/// Free variables of a face and the inverse of the Hessian restricted to
/// them (row-major, `free.len()²` entries).
#[derive(Clone)]
struct Face<T> {
    free: Vec<usize>,
    fixed: Vec<usize>,
    inv: Vec<T>,
}

/// `f = v·(½H)·v + lin·v + k0`, prepared for fast range queries.
#[derive(Clone)]
struct Kernel<T> {
    /// a, b, c, d, e, g, h, i, j, k0
    co: [T; 10],
    hess: [[T; 3]; 3],
    lin: [T; 3],
    faces: Vec<Face<T>>,
}

fn hessian(f: &Quadratic3) -> [[Rational; 3]; 3] {
    let two = rational::int(2);
    [
        [&two * &f.d, f.a.clone(), f.b.clone()],
        [f.a.clone(), &two * &f.e, f.c.clone()],
        [f.b.clone(), f.c.clone(), &two * &f.g],
    ]
}

fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = m.len();
    let det = match n {
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
                - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
                + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
        }
    };
    if Zero::is_zero(&det) {
        return None;
    }
    let adj: Vec<Rational> = match n {
        1 => vec![Rational::one()],
        2 => vec![
            m[1][1].clone(),
            -m[0][1].clone(),
            -m[1][0].clone(),
            m[0][0].clone(),
        ],
        _ => {
            let mut out = Vec::with_capacity(9);
            for r in 0..3 {
                for c in 0..3 {
                    // adj[r][c] = cofactor[c][r]
                    let rows: Vec<usize> = (0..3).filter(|&k| k != c).collect();
                    let cols: Vec<usize> = (0..3).filter(|&k| k != r).collect();
                    let minor = &m[rows[0]][cols[0]] * &m[rows[1]][cols[1]]
                        - &m[rows[0]][cols[1]] * &m[rows[1]][cols[0]];
                    out.push(if (r + c) % 2 == 0 { minor } else { -minor });
                }
            }
            out
        }
    };
    Some(adj.into_iter().map(|x| x / &det).collect())
}

impl<T: Exact> Kernel<T> {
    fn new(f: &Quadratic3) -> Option<Self> {
        let conv = |r: &Rational| T::from_rational(r);
        let c = f.coefficients();
        let co = [
            conv(&c[0])?,
            conv(&c[1])?,
            conv(&c[2])?,
            conv(&c[3])?,
            conv(&c[4])?,
            conv(&c[5])?,
            conv(&c[6])?,
            conv(&c[7])?,
            conv(&c[8])?,
            conv(&c[9])?,
        ];
        let h = hessian(f);
        let hess = [
            [conv(&h[0][0])?, conv(&h[0][1])?, conv(&h[0][2])?],
            [conv(&h[1][0])?, conv(&h[1][1])?, conv(&h[1][2])?],
            [conv(&h[2][0])?, conv(&h[2][1])?, conv(&h[2][2])?],
        ];
        let lin = [conv(&f.h)?, conv(&f.i)?, conv(&f.j)?];
        let mut faces = Vec::new();
        for mask in 1u8..8 {
            let free: Vec<usize> = (0..3).filter(|k| mask >> k & 1 == 1).collect();
            let fixed: Vec<usize> = (0..3).filter(|k| mask >> k & 1 == 0).collect();
            let sub: Vec<Vec<Rational>> = free
                .iter()
                .map(|&r| free.iter().map(|&c| h[r][c].clone()).collect())
                .collect();
            if let Some(inv) = inverse(&sub) {
                let inv = inv.iter().map(conv).collect::<Option<Vec<T>>>()?;
                faces.push(Face { free, fixed, inv });
            }
        }
        Some(Kernel { co, hess, lin, faces })
    }

    fn eval(&self, v: &[T; 3]) -> Option<T> {
        let [a, b, c, d, e, g, h, i, j, k0] = &self.co;
        let [x, y, z] = v;
        // x(d x + a y + b z + h) + y(e y + c z + i) + z(g z + j) + k0
        let px = d.mul(x)?.add(&a.mul(y)?)?.add(&b.mul(z)?)?.add(h)?;
        let py = e.mul(y)?.add(&c.mul(z)?)?.add(i)?;
        let pz = g.mul(z)?.add(j)?;
        x.mul(&px)?.add(&y.mul(&py)?)?.add(&z.mul(&pz)?)?.add(k0)
    }

    fn range(&self, lo: &[T; 3], hi: &[T; 3]) -> Option<(T, T)> {
        let mut best: Option<(T, T)> = None;
        let mut consider = |val: T| {
            best = Some(match best.take() {
                None => (val.clone(), val),
                Some((mn, mx)) => {
                    let mn = if val < mn { val.clone() } else { mn };
                    let mx = if val > mx { val } else { mx };
                    (mn, mx)
                }
            });
        };
        for corner in 0u8..8 {
            let v = [0, 1, 2].map(|k| {
                if corner >> k & 1 == 1 {
                    hi[k].clone()
                } else {
                    lo[k].clone()
                }
            });
            consider(self.eval(&v)?);
        }
        for face in &self.faces {
            if face.free.iter().any(|&k| lo[k] == hi[k]) {
                continue;
            }
            let nfixed = face.fixed.len();
            'corner: for corner in 0u8..(1 << nfixed) {
                let mut v = lo.clone();
                for (bit, &k) in face.fixed.iter().enumerate() {
                    if corner >> bit & 1 == 1 {
                        v[k] = hi[k].clone();
                    }
                }
                // rhs_r = -(lin_r + Σ_fixed H[r][k] v_k)
                let mut rhs = Vec::with_capacity(face.free.len());
                for &r in &face.free {
                    let mut acc = self.lin[r].clone();
                    for &k in &face.fixed {
                        acc = acc.add(&self.hess[r][k].mul(&v[k])?)?;
                    }
                    rhs.push(acc);
                }
                let n = face.free.len();
                for (row, &r) in face.free.iter().enumerate() {
                    let mut acc: Option<T> = None;
                    for (col, val) in rhs.iter().enumerate() {
                        let t = face.inv[row * n + col].mul(val)?;
                        acc = Some(match acc {
                            None => t,
                            Some(s) => s.add(&t)?,
                        });
                    }
                    let coord = acc.expect("face is nonempty").neg()?;
                    if coord < lo[r] || coord > hi[r] {
                        continue 'corner;
                    }
                    v[r] = coord;
                }
                consider(self.eval(&v)?);
            }
        }
        best
    }
}

/// One box of a product cover and the exact range of `f` on it.
fn box_ranges_with<T: Exact>(
    kernel: &Kernel<T>,
    covers: [&IntervalCover; 3],
) -> Option<Vec<(T, T)>> {
    let conv = |cov: &IntervalCover| -> Option<Vec<(T, T)>> {
        cov.intervals
            .iter()
            .map(|(lo, hi)| Some((T::from_rational(lo)?, T::from_rational(hi)?)))
            .collect()
    };
    let (xs, ys, zs) = (conv(covers[0])?, conv(covers[1])?, conv(covers[2])?);
    let (ny, nz) = (ys.len(), zs.len());
    (0..xs.len() * ny * nz)
        .into_par_iter()
        .map(|idx| {
            let (x, rest) = (idx / (ny * nz), idx % (ny * nz));
            let (y, z) = (rest / nz, rest % nz);
            let lo = [xs[x].0.clone(), ys[y].0.clone(), zs[z].0.clone()];
            let hi = [xs[x].1.clone(), ys[y].1.clone(), zs[z].1.clone()];
            kernel.range(&lo, &hi)
        })
        .collect()
}

fn check_boxes(covers: [&IntervalCover; 3], budget: u128) -> Result<()> {
    let required = covers.iter().map(|c| c.len() as u128).product::<u128>();
    if required > budget {
        Err(Error::BudgetExceeded { required, budget })
    } else {
        Ok(())
    }
}

/// Exact `[min f, max f]` on every box of `A × B × C`, in `x`-major order.
pub fn box_ranges(
    f: &Quadratic3,
    covers: [&IntervalCover; 3],
    budget: u128,
) -> Result<Vec<(Rational, Rational)>> {
    check_boxes(covers, budget)?;
    if let Some(k) = Kernel::<Small>::new(f) {
        if let Some(r) = box_ranges_with(&k, covers) {
            return Ok(r
                .par_iter()
                .map(|(lo, hi)| (lo.to_rational(), hi.to_rational()))
                .collect());
        }
    }
    let k = Kernel::<Rational>::new(f).expect("big rationals do not overflow");
    Ok(box_ranges_with(&k, covers).expect("big rationals do not overflow"))
}

/// Range of `f` on a single box.
pub fn range_on_box(f: &Quadratic3, lo: [&Rational; 3], hi: [&Rational; 3]) -> (Rational, Rational) {
    let k = Kernel::<Rational>::new(f).expect("big rationals do not overflow");
    k.range(&lo.map(Clone::clone), &hi.map(Clone::clone))
        .expect("big rationals do not overflow")
}

/// Total length of a union of closed intervals.
pub fn union_length(mut intervals: Vec<(Rational, Rational)>) -> Rational {
    intervals.sort();
    let mut total = Rational::zero();
    let mut current: Option<(Rational, Rational)> = None;
    for (lo, hi) in intervals {
        current = Some(match current {
            Some((clo, chi)) if lo <= chi => (clo, if hi > chi { hi } else { chi }),
            Some((clo, chi)) => {
                total += chi - clo;
                (lo, hi)
            }
            None => (lo, hi),
        });
    }
    if let Some((lo, hi)) = current {
        total += hi - lo;
    }
    total
}

/// Length of `⋃ f(box)` over the product of the covers.
pub fn image_measure(f: &Quadratic3, covers: [&IntervalCover; 3], budget: u128) -> Result<Rational> {
    Ok(union_length(box_ranges(f, covers, budget)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearZeroMass {
    pub epsilon: Rational,
    /// Box pairs on which `|f − f'| ≤ 2ε` is possible.
    pub pairs: u128,
    pub mass: Rational,
    /// `mass / ε`
    pub ratio: Rational,
}

struct SortedRanges {
    lows: Vec<Rational>,
    highs: Vec<Rational>,
    weight: Rational,
}

impl SortedRanges {
    fn new(ranges: Vec<(Rational, Rational)>, covers: [&IntervalCover; 3]) -> Self {
        let (mut lows, mut highs): (Vec<_>, Vec<_>) = ranges.into_iter().unzip();
        lows.par_sort_unstable();
        highs.par_sort_unstable();
        let weight = covers
            .iter()
            .fold(Rational::one(), |acc, c| acc * c.weight_or_uniform());
        SortedRanges { lows, highs, weight }
    }
}

/// Pairs `(r1, r2)` with `l1 − h2 ≤ 2ε` and `l2 − h1 ≤ 2ε`. For fixed `r1`
/// that is `#{l2 ≤ h1 + 2ε} − #{h2 < l1 − 2ε}`, since `h2 < l1 − 2ε`
/// already forces `l2 ≤ h1 + 2ε`.
fn count_close_pairs(
    first: &[(Rational, Rational)],
    second: &SortedRanges,
    two_eps: &Rational,
) -> u128 {
    first
        .par_iter()
        .map(|(l1, h1)| {
            let upper = h1 + two_eps;
            let lower = l1 - two_eps;
            let le = second.lows.partition_point(|l2| *l2 <= upper);
            let lt = second.highs.partition_point(|h2| *h2 < lower);
            (le - lt) as u128
        })
        .sum()
}

/// `near_zero_mass` for several values of `ε`, reusing the box ranges.
pub fn near_zero_mass_table(
    f: &Quadratic3,
    side1: [&IntervalCover; 3],
    side2: [&IntervalCover; 3],
    epsilons: &[Rational],
    budget: u128,
) -> Result<Vec<NearZeroMass>> {
    if let Some(e) = epsilons.iter().find(|e| !e.is_positive()) {
        return Err(Error::InvalidInput(format!(
            "epsilon must be positive, got {}",
            rational::format(e)
        )));
    }
    let r1 = box_ranges(f, side1, budget)?;
    let r2 = if side1 == side2 {
        r1.clone()
    } else {
        box_ranges(f, side2, budget)?
    };
    let sorted2 = SortedRanges::new(r2, side2);
    let w1 = side1
        .iter()
        .fold(Rational::one(), |acc, c| acc * c.weight_or_uniform());
    Ok(epsilons
        .iter()
        .map(|eps| {
            let two_eps = eps * rational::int(2);
            let pairs = count_close_pairs(&r1, &sorted2, &two_eps);
            let mass = Rational::from_integer(BigInt::from(pairs)) * &w1 * &sorted2.weight;
            let ratio = &mass / eps;
            NearZeroMass {
                epsilon: eps.clone(),
                pairs,
                mass,
                ratio,
            }
        })
        .collect())
}

pub fn near_zero_mass(
    f: &Quadratic3,
    side1: [&IntervalCover; 3],
    side2: [&IntervalCover; 3],
    epsilon: &Rational,
    budget: u128,
) -> Result<NearZeroMass> {
    Ok(near_zero_mass_table(f, side1, side2, std::slice::from_ref(epsilon), budget)?
        .pop()
        .expect("one row per epsilon"))
}

/// `(k, |f(A, B, C)|)` for `f = xy + z`, `A = {0}`, `B = [0, 1]` and `C` the
/// middle-thirds cover of depth `k`, for `k = 1..=n`.
pub fn sharpness_demo(n: u32) -> Result<Vec<(u32, Rational)>> {
    if n == 0 {
        return Err(Error::InvalidInput("depth must be at least 1".into()));
    }
    let f = Quadratic3::parse("x*y + z")?;
    let a = IntervalCover::point(Rational::zero());
    let b = IntervalCover::unit();
    (1..=n)
        .map(|k| {
            let c = cantor_cover(&CantorSpec::middle_thirds(k))?;
            Ok((k, image_measure(&f, [&a, &b, &c], DEFAULT_BOX_BUDGET)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn q(s: &str) -> Quadratic3 {
        Quadratic3::parse(s).unwrap()
    }

    #[test]
    fn middle_thirds_steps() {
        let c1 = cantor_cover(&CantorSpec::middle_thirds(1)).unwrap();
        assert_eq!(
            c1.intervals(),
            &[(int(0), frac(1, 3)), (frac(2, 3), int(1))]
        );
        let c2 = cantor_cover(&CantorSpec::middle_thirds(2)).unwrap();
        assert_eq!(c2.len(), 4);
        assert!(c2.intervals().iter().all(|(lo, hi)| hi - lo == frac(1, 9)));
        assert_eq!(c2.weight(), Some(&frac(1, 4)));
    }

    #[test]
    fn full_binary_cover_is_the_unit_interval() {
        let spec = CantorSpec::full_binary(5);
        let c = cantor_cover(&spec).unwrap();
        assert_eq!(c.len(), 32);
        assert_eq!(c.total_length(), int(1));
        assert_eq!(spec.dimension(), 1.0);
    }

    #[test]
    fn cover_specs() {
        assert_eq!(parse_cover("unit", 3).unwrap(), IntervalCover::unit());
        assert_eq!(parse_cover("point:1/2", 3).unwrap(), IntervalCover::point(frac(1, 2)));
        assert_eq!(parse_cover("cantor:3:0,2", 2).unwrap().len(), 4);
        assert_eq!(
            parse_cover("interval:-1:2", 0).unwrap().total_length(),
            int(3)
        );
        for bad in ["cantor:3", "interval:2:1", "cantor:3:0,5", "blob"] {
            assert!(parse_cover(bad, 2).is_err(), "{bad}");
        }
    }

    #[test]
    fn empty_digits_rejected() {
        assert!(CantorSpec::new(3, &[], 2).is_err());
        assert!(CantorSpec::new(3, &[3], 2).is_err());
        assert!(CantorSpec::new(1, &[0], 2).is_err());
    }

    #[test]
    fn image_measure_examples() {
        let a = IntervalCover::point(int(0));
        let b = IntervalCover::unit();
        let c = cantor_cover(&CantorSpec::middle_thirds(2)).unwrap();
        let m = image_measure(&q("x*y + z"), [&a, &b, &c], DEFAULT_BOX_BUDGET).unwrap();
        assert_eq!(m, frac(4, 9));

        let u = IntervalCover::unit();
        let m = image_measure(&q("x + y + z"), [&u, &u, &u], DEFAULT_BOX_BUDGET).unwrap();
        assert_eq!(m, int(3));

        let z = IntervalCover::point(int(0));
        let m = image_measure(&q("(x - y)^2 + z"), [&z, &z, &u], DEFAULT_BOX_BUDGET).unwrap();
        assert_eq!(m, int(1));
    }

    #[test]
    fn square_ranges_include_interior_minimum() {
        let (lo, hi) = range_on_box(
            &q("(x - y)^2"),
            [&int(-1), &int(-1), &int(0)],
            [&int(1), &int(1), &int(0)],
        );
        assert_eq!((lo, hi), (int(0), int(4)));
        let (lo, hi) = range_on_box(
            &q("x^2 - x"),
            [&int(0), &int(0), &int(0)],
            [&int(1), &int(0), &int(0)],
        );
        assert_eq!((lo, hi), (frac(-1, 4), int(0)));
    }

    #[test]
    fn saddle_range() {
        // x*y on [-1,1]^2: extremes at the vertices
        let (lo, hi) = range_on_box(
            &q("x*y"),
            [&int(-1), &int(-1), &int(0)],
            [&int(1), &int(1), &int(0)],
        );
        assert_eq!((lo, hi), (int(-1), int(1)));
    }

    #[test]
    fn union_merges_touching_intervals() {
        let v = vec![
            (int(2), int(3)),
            (int(0), int(1)),
            (int(1), int(2)),
            (int(5), int(6)),
            (frac(11, 2), int(7)),
        ];
        assert_eq!(union_length(v), int(5));
    }

    #[test]
    fn budget_is_enforced() {
        let c = cantor_cover(&CantorSpec::full_binary(4)).unwrap();
        assert!(matches!(
            image_measure(&q("x*y+z"), [&c, &c, &c], 100),
            Err(Error::BudgetExceeded { required: 4096, budget: 100 })
        ));
    }

    #[test]
    fn mass_is_one_for_large_epsilon() {
        let u = IntervalCover::unit();
        let side = [&u, &u, &u];
        let r = near_zero_mass(&q("x*y + z"), side, side, &int(1), DEFAULT_BOX_BUDGET).unwrap();
        assert_eq!(r.mass, int(1));
        assert_eq!(r.ratio, int(1));
        let r = near_zero_mass(&q("x*y + z"), side, side, &int(4), DEFAULT_BOX_BUDGET).unwrap();
        assert_eq!(r.ratio, frac(1, 4));
    }

    #[test]
    fn close_pairs_match_brute_force() {
        let f = q("x*y - 2*z^2 + x");
        let a = cantor_cover(&CantorSpec::middle_thirds(2)).unwrap();
        let b = cantor_cover(&CantorSpec::full_binary(2)).unwrap();
        let side1 = [&a, &b, &b];
        let side2 = [&b, &a, &b];
        let r1 = box_ranges(&f, side1, DEFAULT_BOX_BUDGET).unwrap();
        let r2 = box_ranges(&f, side2, DEFAULT_BOX_BUDGET).unwrap();
        for eps in [frac(1, 64), frac(1, 8), int(1)] {
            let two = &eps * int(2);
            let brute = r1
                .iter()
                .flat_map(|(l1, h1)| r2.iter().map(move |(l2, h2)| (l1, h1, l2, h2)))
                .filter(|(l1, h1, l2, h2)| *l1 - *h2 <= two && *l2 - *h1 <= two)
                .count() as u128;
            let got = near_zero_mass(&f, side1, side2, &eps, DEFAULT_BOX_BUDGET).unwrap();
            assert_eq!(got.pairs, brute);
        }
    }

    #[test]
    fn sharpness_values() {
        let rows = sharpness_demo(4).unwrap();
        assert_eq!(rows[0], (1, frac(2, 3)));
        assert_eq!(rows[3], (4, frac(16, 81)));
        assert!(sharpness_demo(0).is_err());
    }

    #[test]
    fn small_and_big_kernels_agree() {
        let f = q("3*x*y - 5*x*z + 7*y*z + x^2 - 2*y^2 + 4*z^2 - x + 2*y - 3*z + 1");
        let ks = Kernel::<Small>::new(&f).unwrap();
        let kb = Kernel::<Rational>::new(&f).unwrap();
        let lo = [frac(-1, 3), frac(1, 7), frac(-2, 5)];
        let hi = [frac(2, 3), frac(5, 7), frac(1, 5)];
        let (sl, sh) = ks
            .range(&lo.clone().map(|r| Small::from_rational(&r).unwrap()), &hi.clone().map(|r| Small::from_rational(&r).unwrap()))
            .unwrap();
        let (bl, bh) = kb.range(&lo, &hi).unwrap();
        assert_eq!((sl.to_rational(), sh.to_rational()), (bl, bh));
    }
}
