//! Closed-form constants and bounds, in exact arithmetic.
//!
//! Real numbers that occur here all have the form `q·√r` with `q, r`
//! nonnegative rationals, so every comparison is done on squares.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::complexes::OmegaSet;
use crate::error::{Error, Result};

/// `coeff · √radicand`, both nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    coeff: BigRational,
    radicand: BigRational,
}

impl Surd {
    pub fn new(coeff: BigRational, radicand: BigRational) -> Self {
        assert!(!coeff.is_negative() && !radicand.is_negative(), "surds are nonnegative");
        if coeff.is_zero() || radicand.is_zero() {
            return Surd { coeff: BigRational::zero(), radicand: BigRational::one() };
        }
        // move square factors of the radicand into the coefficient
        let (cn, rn) = split_square(radicand.numer().magnitude());
        let (cd, rd) = split_square(radicand.denom().magnitude());
        // √(a/b) = √(a·b)/b, so the radicand becomes an integer
        let (cd2, r) = split_square(&(&rn * &rd));
        let coeff = coeff * ratio(&cn * &cd2, &cd * &rd);
        Surd { coeff, radicand: BigRational::from_integer(BigInt::from(r)) }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Surd::new(BigRational::from_integer(n.into()), BigRational::one())
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    /// The exact square, a rational.
    pub fn square(&self) -> BigRational {
        &self.coeff * &self.coeff * &self.radicand
    }

    pub fn scale(&self, by: &BigRational) -> Surd {
        Surd::new(&self.coeff * by, self.radicand.clone())
    }

    /// Least integer not below the value.
    pub fn ceil(&self) -> BigUint {
        let sq = self.square();
        let (p, q) = (sq.numer().magnitude().clone(), sq.denom().magnitude().clone());
        // n² ≥ p/q ⇔ n²·q ≥ p
        let mut n = (&p / &q).sqrt();
        while &n * &n * &q < p {
            n += 1u32;
        }
        n
    }

    /// Greatest integer not above the value.
    pub fn floor(&self) -> BigUint {
        let sq = self.square();
        (sq.numer().magnitude() / sq.denom().magnitude()).sqrt()
    }

    pub fn is_integer(&self) -> bool {
        self.radicand.is_one() && self.coeff.is_integer()
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        self.square().cmp(&other.square())
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() {
            return write!(f, "{}", self.coeff);
        }
        let (n, d) = (self.coeff.numer(), self.coeff.denom());
        if !n.is_one() {
            write!(f, "{n}")?;
        }
        write!(f, "√{}", self.radicand)?;
        if !d.is_one() {
            write!(f, "/{d}")?;
        }
        Ok(())
    }
}

fn ratio(n: BigUint, d: BigUint) -> BigRational {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

/// `n = c²·r` with `r` squarefree over small primes; trial division is
/// enough for the desk-scale radicands that occur here.
fn split_square(n: &BigUint) -> (BigUint, BigUint) {
    let mut c = BigUint::one();
    let mut r = BigUint::one();
    let mut rest = n.clone();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            c *= &p;
        }
        if e % 2 == 1 {
            r *= &p;
        }
        p += 1u32;
    }
    (c, r * rest)
}

/// `α = √(2/(d+1))`.
pub fn alpha(d: u32) -> Surd {
    Surd::new(BigRational::one(), Ratio::new(BigInt::from(2), BigInt::from(d + 1)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constants {
    pub d: u32,
    pub alpha: Surd,
    pub beta: BigUint,
    pub c: BigUint,
}

fn big(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

impl Constants {
    /// Checks `C > β/α` and `C·α > 3`.
    pub fn new(d: u32, beta: impl Into<BigUint>, c: impl Into<BigUint>) -> Result<Self> {
        let (beta, c) = (beta.into(), c.into());
        let a2 = alpha(d).square();
        let c2a2 = big(&c) * big(&c) * &a2;
        if c2a2 <= big(&beta) * big(&beta) {
            return Err(Error::InvalidConstants(format!("C = {c} is not above β/α for β = {beta}, d = {d}")));
        }
        if c2a2 <= BigRational::from_integer(9.into()) {
            return Err(Error::InvalidConstants(format!("C·α = {c}·√(2/{}) is not above 3", d + 1)));
        }
        Ok(Constants { d, alpha: alpha(d), beta, c })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "alpha": surd_json(&self.alpha),
            "beta": self.beta.to_string(),
            "C": self.c.to_string(),
        })
    }
}

pub fn surd_json(s: &Surd) -> Value {
    json!({
        "exact": s.to_string(),
        "coeff": s.coeff().to_string(),
        "radicand": s.radicand().to_string(),
        "floor": s.floor().to_string(),
        "ceil": s.ceil().to_string(),
    })
}

/// The longest loop of Ω.
pub fn beta_of(omega: &OmegaSet) -> Result<usize> {
    omega.loops.iter().map(|l| l.len()).max().ok_or(Error::EmptySet("Ω"))
}

/// The least integer `C` with `C > β/α` and `C·α > 3`.
pub fn choose_c(d: u32, beta: &BigUint) -> BigUint {
    let a2 = alpha(d).square();
    let bound = std::cmp::max(big(beta) * big(beta), BigRational::from_integer(9.into()));
    // C² > bound / α²
    let target = bound / a2;
    let mut c = target.floor().to_integer().magnitude().sqrt();
    while big(&c) * big(&c) <= target {
        c += 1u32;
    }
    c
}

/// `{0} ∪ {C^(2ⁿ) : n ∈ F}`.
pub fn s_of_f(c: &BigUint, f: &BTreeSet<u32>) -> BTreeSet<BigInt> {
    let mut out = BTreeSet::from([BigInt::zero()]);
    for &n in f {
        out.insert(BigInt::from(c.pow(1u32 << n)));
    }
    out
}

/// `min |n|` over `S`.
pub fn m_of(s: &BTreeSet<BigInt>) -> Result<BigUint> {
    s.iter().map(|n| n.magnitude().clone()).min().ok_or(Error::EmptySet("S"))
}

/// `|n| / √(d+1)`.
pub fn height_distance(d: u32, n: &BigInt) -> Surd {
    Surd::new(BigRational::from_integer(n.abs()), Ratio::new(BigInt::one(), BigInt::from(d + 1)))
}

/// `m(T−S)·√(2/(d+1))`, requiring `S ⊆ T`.
pub fn kernel_length_lower_bound(d: u32, s: &BTreeSet<BigInt>, t: &BTreeSet<BigInt>) -> Result<Surd> {
    if !s.is_subset(t) {
        return Err(Error::Invalid("S must be contained in T".into()));
    }
    let diff: BTreeSet<BigInt> = t.difference(s).cloned().collect();
    if diff.is_empty() {
        return Err(Error::EmptySet("T−S"));
    }
    Ok(alpha(d).scale(&big(&m_of(&diff)?)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub n: u32,
    /// `α·C^(2ⁿ)`
    pub lower: Surd,
    /// `β·C^(2ⁿ)`
    pub upper: BigUint,
}

impl Interval {
    pub fn lower_ceil(&self) -> BigUint {
        self.lower.ceil()
    }

    pub fn contains(&self, l: &BigUint) -> bool {
        Surd::integer(l.clone()) >= self.lower && *l <= self.upper
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSchedule {
    pub constants: Constants,
    /// whether 3 is a predicted length, which happens iff `d ≥ 2`
    pub base_three: bool,
    pub intervals: Vec<Interval>,
    /// `(n, βC^(2ⁿ) < αC^(2ⁿ⁺¹))` for consecutive intervals
    pub disjointness: Vec<(u32, bool)>,
}

impl IntervalSchedule {
    pub fn is_disjoint(&self) -> bool {
        self.disjointness.iter().all(|&(_, ok)| ok)
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if self.base_three {
            parts.push("{3}".to_string());
        }
        for i in &self.intervals {
            parts.push(format!("[{},{}]", i.lower_ceil(), i.upper));
        }
        parts.join(" ∪ ")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "constants": self.constants.to_json(),
            "base_three": self.base_three,
            "intervals": self.intervals.iter().map(|i| json!({
                "n": i.n,
                "lower": surd_json(&i.lower),
                "lower_ceil": i.lower_ceil().to_string(),
                "upper": i.upper.to_string(),
            })).collect::<Vec<_>>(),
            "disjointness": self.disjointness.iter().map(|&(n, ok)| json!({"n": n, "holds": ok})).collect::<Vec<_>>(),
            "disjoint": self.is_disjoint(),
        })
    }
}

/// Intervals `[αC^(2ⁿ), βC^(2ⁿ)]` for `0 ≤ n ≤ n_max`, with each
/// separation `βC^(2ⁿ) < αC^(2ⁿ⁺¹)` checked exactly.
pub fn predicted_intervals(constants: &Constants, n_max: u32) -> Result<IntervalSchedule> {
    let constants = Constants::new(constants.d, constants.beta.clone(), constants.c.clone())?;
    let power = |n: u32| constants.c.pow(1u32 << n);
    let intervals: Vec<Interval> = (0..=n_max)
        .map(|n| {
            let p = power(n);
            Interval { n, lower: constants.alpha.scale(&big(&p)), upper: &constants.beta * &p }
        })
        .collect();
    let disjointness = (0..n_max)
        .map(|n| {
            let next_lower = constants.alpha.scale(&big(&power(n + 1)));
            (n, Surd::integer(intervals[n as usize].upper.clone()) < next_lower)
        })
        .collect();
    Ok(IntervalSchedule { base_three: constants.d >= 2, constants, intervals, disjointness })
}

/// For each `n` in the symmetric difference of `F` and `F'`, the value
/// `C^(2ⁿ−1)` that the constant of any quasi-isometry must exceed.
pub fn qi_obstruction(f: &BTreeSet<u32>, f_prime: &BTreeSet<u32>, c: &BigUint) -> BTreeMap<u32, BigUint> {
    f.symmetric_difference(f_prime).map(|&n| (n, c.pow((1u32 << n) - 1))).collect()
}

pub fn obstruction_json(thresholds: &BTreeMap<u32, BigUint>) -> Value {
    Value::Object(thresholds.iter().map(|(n, k)| (n.to_string(), Value::String(k.to_string()))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{samples, EdgeLoop};

    fn n(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn set(xs: &[i64]) -> BTreeSet<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn beta_examples() {
        let c4 = samples::cycle(4);
        let boundary = samples::boundary_loop(&c4, 4);
        assert_eq!(beta_of(&OmegaSet::new(vec![boundary.clone()])).unwrap(), 4);
        assert_eq!(beta_of(&OmegaSet::new(vec![boundary.repeated(2)])).unwrap(), 8);
        let theta = crate::complexes::flag_completion(
            &crate::graph::SimpleGraph::numbered(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap(),
        );
        let mixed = OmegaSet::new(vec![
            EdgeLoop::from_vertex_cycle(&theta, &[0, 1, 2, 3]).unwrap(),
            EdgeLoop::from_vertex_cycle(&theta, &[0, 1, 2, 3, 4, 5]).unwrap(),
        ]);
        assert_eq!(beta_of(&mixed).unwrap(), 6);
        assert_eq!(beta_of(&OmegaSet::new(vec![])), Err(Error::EmptySet("Ω")));
    }

    #[test]
    fn choose_c_examples() {
        assert_eq!(choose_c(1, &n(4)), n(5));
        assert_eq!(choose_c(2, &n(4)), n(5));
        assert_eq!(choose_c(1, &n(2)), n(4));
        for d in 1..6 {
            for beta in 1..20 {
                let c = choose_c(d, &n(beta));
                assert!(Constants::new(d, beta, c.clone()).is_ok());
                assert!(Constants::new(d, beta, c - 1u32).is_err());
            }
        }
    }

    #[test]
    fn s_of_f_and_m() {
        assert_eq!(s_of_f(&n(5), &BTreeSet::new()), set(&[0]));
        assert_eq!(s_of_f(&n(5), &BTreeSet::from([1, 2])), set(&[0, 25, 625]));
        assert_eq!(s_of_f(&n(10), &BTreeSet::from([0])), set(&[0, 10]));
        assert_eq!(m_of(&set(&[-3, 4])).unwrap(), n(3));
        assert_eq!(m_of(&set(&[0, 7])).unwrap(), n(0));
        assert!(m_of(&set(&[])).is_err());
    }

    #[test]
    fn heights_and_kernel_bounds() {
        assert_eq!(height_distance(3, &BigInt::from(-8)), Surd::integer(4));
        assert_eq!(height_distance(5, &BigInt::zero()), Surd::integer(0));
        assert_eq!(height_distance(1, &BigInt::from(3)).to_string(), "3√2/2");
        assert_eq!(kernel_length_lower_bound(1, &set(&[0]), &set(&[0, 2])).unwrap(), Surd::integer(2));
        assert_eq!(kernel_length_lower_bound(1, &set(&[0]), &set(&[0, 1])).unwrap(), Surd::integer(1));
        assert_eq!(kernel_length_lower_bound(3, &set(&[0]), &set(&[0, 4])).unwrap().to_string(), "2√2");
        assert_eq!(kernel_length_lower_bound(1, &set(&[0]), &set(&[0])), Err(Error::EmptySet("T−S")));
    }

    #[test]
    fn height_distance_is_even_and_linear() {
        for d in 0..5 {
            for k in 0..20i64 {
                let h = height_distance(d, &BigInt::from(k));
                assert_eq!(h, height_distance(d, &BigInt::from(-k)));
                assert_eq!(h.scale(&BigRational::from_integer(3.into())), height_distance(d, &BigInt::from(3 * k)));
            }
        }
    }

    #[test]
    fn interval_examples() {
        let k = Constants::new(1, 4u32, 5u32).unwrap();
        let s = predicted_intervals(&k, 2).unwrap();
        assert!(s.is_disjoint());
        assert!(!s.base_three);
        assert_eq!(s.render(), "[5,20] ∪ [25,100] ∪ [625,2500]");
        assert!(matches!(Constants::new(1, 4u32, 2u32), Err(Error::InvalidConstants(_))));
        let k = Constants::new(1, 1u32, 4u32).unwrap();
        assert_eq!(predicted_intervals(&k, 1).unwrap().render(), "[4,4] ∪ [16,16]");
        let k = Constants::new(2, 4u32, 5u32).unwrap();
        let s = predicted_intervals(&k, 1).unwrap();
        assert!(s.base_three);
        // ⌈5·√(2/3)⌉ = 5
        assert_eq!(s.intervals[0].lower_ceil(), n(5));
        assert!(s.intervals[0].contains(&n(5)) && !s.intervals[0].contains(&n(4)));
    }

    #[test]
    fn obstruction_examples() {
        let empty = BTreeSet::new();
        assert_eq!(qi_obstruction(&BTreeSet::from([1]), &empty, &n(5)), BTreeMap::from([(1, n(5))]));
        assert!(qi_obstruction(&BTreeSet::from([1, 2]), &BTreeSet::from([1, 2]), &n(5)).is_empty());
        assert_eq!(qi_obstruction(&BTreeSet::from([3]), &empty, &n(5)), BTreeMap::from([(3, n(78125))]));
    }

    #[test]
    fn surd_rounding() {
        let s = Surd::new(BigRational::one(), BigRational::from_integer(2.into()));
        assert_eq!((s.floor(), s.ceil()), (n(1), n(2)));
        let four = Surd::new(BigRational::one(), BigRational::from_integer(16.into()));
        assert!(four.is_integer());
        assert_eq!((four.floor(), four.ceil()), (n(4), n(4)));
    }
}
