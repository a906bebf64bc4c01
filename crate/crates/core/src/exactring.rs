//! Exact coefficient arithmetic shared by every other module.
//!
//! Four rings, all over big integers / big rationals, all with sparse
//! `BTreeMap` storage so that iteration order (and therefore printing and
//! serialization) is deterministic:
//!
//! - [`LaurentQ`]: Laurent polynomials in `q` with rational coefficients.
//! - [`PolyQT`]: polynomials in `(q, t)` with integer coefficients.
//! - [`RatFuncQT`]: quotients of two [`PolyQT`] values, kept unreduced;
//!   equality is by cross-multiplication so no bivariate gcd is ever needed.
//! - [`TruncSeriesQinv`]: truncated power series in `q^{-1}` with an
//!   optional monomial shift, used for graded characters.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Big rational scalar type used throughout the crate.
pub type Rat = BigRational;

/// Convenience constructor for an integer-valued [`Rat`].
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("division left a nonzero remainder")]
    NonExactDivision,
    #[error("denominator vanishes under the requested substitution")]
    VanishingDenominator,
    #[error("denominator polynomial is zero")]
    ZeroDenominator,
    #[error("geometric factor exponent must be positive")]
    GeometricZeroExponent,
    #[error("series truncation orders differ ({0} vs {1})")]
    OrderMismatch(i64, i64),
    #[error("expected a polynomial in q^-1 but found exponent {0}")]
    PositiveExponent(i64),
}

// ---------------------------------------------------------------------------
// LaurentQ
// ---------------------------------------------------------------------------

/// Sparse Laurent polynomial in `q` with rational coefficients.
///
/// Invariant: no stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentQ {
    terms: BTreeMap<i64, Rat>,
}

impl LaurentQ {
    pub fn zero() -> Self {
        LaurentQ { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::monomial(0, rat(n))
    }

    /// The monomial `c * q^exp` (the zero polynomial when `c = 0`).
    pub fn monomial(exp: i64, coef: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(exp, coef);
        }
        LaurentQ { terms }
    }

    /// `q^exp`.
    pub fn q_power(exp: i64) -> Self {
        Self::monomial(exp, Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0).is_one()
    }

    /// Coefficient of `q^exp` (zero when absent).
    pub fn coeff(&self, exp: i64) -> Rat {
        self.terms.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn insert_add(&mut self, exp: i64, coef: &Rat) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rat::zero);
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentQ { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentQ::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.insert_add(e1 + e2, &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return LaurentQ::zero();
        }
        LaurentQ { terms: self.terms.iter().map(|(e, c)| (*e, c * r)).collect() }
    }

    pub fn mul_q_power(&self, exp: i64) -> Self {
        LaurentQ { terms: self.terms.iter().map(|(e, c)| (e + exp, c.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = LaurentQ::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Substitute `q -> q^{-1}` (negate every exponent).
    pub fn subst_q_inv(&self) -> Self {
        LaurentQ { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// Evaluate at `q = 1` (the sum of all coefficients).
    pub fn eval_at_one(&self) -> Rat {
        let mut acc = Rat::zero();
        for c in self.terms.values() {
            acc += c;
        }
        acc
    }

    /// Exact division in the Laurent ring: returns `self / d` if the
    /// remainder is zero, `None` otherwise (or when `d = 0`).
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentQ::zero());
        }
        let shift = self.min_exp().unwrap() - d.min_exp().unwrap();
        // Work with ordinary polynomials anchored at exponent zero.
        let mut rem = self.mul_q_power(-self.min_exp().unwrap());
        let div = d.mul_q_power(-d.min_exp().unwrap());
        let div_deg = div.max_exp().unwrap();
        let div_lead = div.coeff(div_deg);
        let mut quot = LaurentQ::zero();
        while !rem.is_zero() {
            let deg = rem.max_exp().unwrap();
            if deg < div_deg {
                return None;
            }
            let t = LaurentQ::monomial(deg - div_deg, rem.coeff(deg) / &div_lead);
            rem = rem.sub(&t.mul(&div));
            quot = quot.add(&t);
        }
        Some(quot.mul_q_power(shift))
    }

    /// The symmetric quantum integer `[m]_q = (q^m - q^{-m}) / (q - q^{-1})`.
    pub fn q_int(m: i64) -> Self {
        let mut out = LaurentQ::zero();
        let a = m.abs();
        let mut e = 1 - a;
        while e <= a - 1 {
            out.insert_add(e, &Rat::one());
            e += 2;
        }
        if m < 0 {
            out = out.neg();
        }
        out
    }

    /// The quantum factorial `[m]_q! = [1]_q [2]_q ... [m]_q`.
    pub fn q_factorial(m: u64) -> Self {
        let mut out = LaurentQ::one();
        for j in 1..=m {
            out = out.mul(&Self::q_int(j as i64));
        }
        out
    }

    /// JSON form: a list of `{"qexp": e, "coef": "num/den"}` objects.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| {
                    serde_json::json!({ "qexp": e, "coef": rat_string(c) })
                })
                .collect(),
        )
    }
}

impl std::ops::Add for &LaurentQ {
    type Output = LaurentQ;
    fn add(self, rhs: &LaurentQ) -> LaurentQ {
        LaurentQ::add(self, rhs)
    }
}

impl std::ops::Sub for &LaurentQ {
    type Output = LaurentQ;
    fn sub(self, rhs: &LaurentQ) -> LaurentQ {
        LaurentQ::sub(self, rhs)
    }
}

impl std::ops::Mul for &LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: &LaurentQ) -> LaurentQ {
        LaurentQ::mul(self, rhs)
    }
}

/// Render a rational without a denominator when it is integral.
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Demand that a rational is an integer fitting in `i64` and return it.
/// Pairings and grading exponents are integral whenever the inputs lie in
/// the relevant lattices, so a failure here means a caller bug.
pub fn rat_to_i64(r: &Rat) -> i64 {
    assert!(r.denom().is_one(), "expected an integer, got {}", r);
    r.numer()
        .to_i64()
        .expect("integer out of i64 range")
}

fn fmt_coeff_var(f: &mut fmt::Formatter<'_>, c: &Rat, var_part: &str, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if var_part.is_empty() {
        write!(f, "{}", rat_string(&abs))
    } else if abs.is_one() {
        write!(f, "{}", var_part)
    } else {
        write!(f, "{}*{}", rat_string(&abs), var_part)
    }
}

impl fmt::Display for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let var = match *e {
                0 => String::new(),
                1 => "q".to_string(),
                e => format!("q^{}", e),
            };
            fmt_coeff_var(f, c, &var, first)?;
            first = false;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// PolyQT
// ---------------------------------------------------------------------------

/// Sparse polynomial in `(q, t)` with big-integer coefficients.
///
/// Keys are `(q exponent, t exponent)` pairs ordered lexicographically, so
/// the "leading term" of a nonzero polynomial is its last stored key.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyQT {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl PolyQT {
    pub fn zero() -> Self {
        PolyQT { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, BigInt::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::monomial(0, 0, BigInt::from(n))
    }

    pub fn monomial(qexp: i64, texp: i64, coef: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert((qexp, texp), coef);
        }
        PolyQT { terms }
    }

    /// The binomial factor `1 - q^a t^b`.
    pub fn one_minus(a: i64, b: i64) -> Self {
        let mut p = PolyQT::one();
        p.insert_add((a, b), &BigInt::from(-1));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&(0, 0)).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &BigInt)> {
        self.terms.iter()
    }

    fn insert_add(&mut self, key: (i64, i64), coef: &BigInt) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_add(*k, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        PolyQT { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = PolyQT::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.insert_add((a1 + a2, b1 + b2), &(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = PolyQT::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Lexicographic leading term (largest `(qexp, texp)` key).
    pub fn leading(&self) -> Option<(&(i64, i64), &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Gcd of the integer coefficients (zero polynomial has content zero).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        g
    }

    pub fn div_int_exact(&self, d: &BigInt) -> Self {
        assert!(!d.is_zero());
        PolyQT {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let (quot, rem) = c.div_rem(d);
                    assert!(rem.is_zero(), "non-exact integer content division");
                    (*k, quot)
                })
                .collect(),
        }
    }

    /// Exact division in `Z[q^{\pm 1}, t^{\pm 1}]`, performed as univariate
    /// division in `q` whose coefficients are Laurent polynomials in `t`.
    /// Returns `None` when the division is not exact (or the quotient would
    /// not have integer coefficients).
    pub fn exact_div(&self, d: &PolyQT) -> Option<PolyQT> {
        fn blocks(p: &PolyQT) -> BTreeMap<i64, LaurentQ> {
            let mut out: BTreeMap<i64, LaurentQ> = BTreeMap::new();
            for ((a, b), c) in &p.terms {
                let blk = out.entry(*a).or_insert_with(LaurentQ::zero);
                *blk = blk.add(&LaurentQ::monomial(*b, Rat::from_integer(c.clone())));
            }
            out
        }
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(PolyQT::zero());
        }
        let mut rem = blocks(self);
        let db = blocks(d);
        let (&dq, dlead) = db.iter().next_back().unwrap();
        let min_quot_q = self.terms.keys().next().unwrap().0 - d.terms.keys().next().unwrap().0;
        let mut quot: Vec<(i64, LaurentQ)> = Vec::new();
        loop {
            let (rq, rlead) = match rem.iter().next_back() {
                Some((&rq, rl)) => (rq, rl.clone()),
                None => break,
            };
            let qexp = rq - dq;
            if qexp < min_quot_q {
                return None;
            }
            let qt = rlead.exact_div(&dlead)?;
            for (e, blk) in &db {
                let target = e + qexp;
                let cur = rem.remove(&target).unwrap_or_else(LaurentQ::zero);
                let upd = cur.sub(&blk.mul(&qt));
                if !upd.is_zero() {
                    rem.insert(target, upd);
                }
            }
            quot.push((qexp, qt));
        }
        let mut out = PolyQT::zero();
        for (a, blk) in quot {
            for (b, c) in blk.terms() {
                if !c.denom().is_one() {
                    return None;
                }
                out.insert_add((a, *b), c.numer());
            }
        }
        Some(out)
    }

    /// Substitute `t = 0`.
    pub fn eval_t0(&self) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for ((a, b), c) in &self.terms {
            if *b == 0 {
                out.insert_add(*a, &Rat::from_integer(c.clone()));
            }
        }
        out
    }

    /// Substitute `t = q`.
    pub fn eval_tq(&self) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for ((a, b), c) in &self.terms {
            out.insert_add(a + b, &Rat::from_integer(c.clone()));
        }
        out
    }

    /// JSON form: a list of `{"qexp": a, "texp": b, "coef": "..."}` objects.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|((a, b), c)| {
                    serde_json::json!({ "qexp": a, "texp": b, "coef": c.to_string() })
                })
                .collect(),
        )
    }
}

impl fmt::Display for PolyQT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in &self.terms {
            let qpart = match *a {
                0 => String::new(),
                1 => "q".to_string(),
                a => format!("q^{}", a),
            };
            let tpart = match *b {
                0 => String::new(),
                1 => "t".to_string(),
                b => format!("t^{}", b),
            };
            let var = match (qpart.is_empty(), tpart.is_empty()) {
                (true, true) => String::new(),
                (false, true) => qpart,
                (true, false) => tpart,
                (false, false) => format!("{}*{}", qpart, tpart),
            };
            fmt_coeff_var(f, &Rat::from_integer(c.clone()), &var, first)?;
            first = false;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// RatFuncQT
// ---------------------------------------------------------------------------

/// Substitution points supported by [`RatFuncQT::eval_t`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TPoint {
    /// `t = 0`
    Zero,
    /// `t = q`
    Q,
}

/// Rational function in `(q, t)`, stored as an unreduced `num / den` pair.
///
/// Normalization is deliberately light: the pair is divided by the gcd of
/// the two integer contents and the denominator's lexicographic leading
/// coefficient is made positive. Equality is decided by cross-multiplication
/// (`a/b = c/d  iff  a*d = c*b`), which never needs a polynomial gcd.
#[derive(Debug, Clone)]
pub struct RatFuncQT {
    num: PolyQT,
    den: PolyQT,
}

impl RatFuncQT {
    /// Build `num / den`, panicking on a zero denominator (use
    /// [`RatFuncQT::checked_new`] for fallible construction).
    pub fn new(num: PolyQT, den: PolyQT) -> Self {
        Self::checked_new(num, den).expect("zero denominator")
    }

    pub fn checked_new(num: PolyQT, den: PolyQT) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        let mut num = num;
        let mut den = den;
        if num.is_zero() {
            return Ok(RatFuncQT { num, den: PolyQT::one() });
        }
        let g = num.content().gcd(&den.content());
        if !g.is_one() {
            num = num.div_int_exact(&g);
            den = den.div_int_exact(&g);
        }
        // Sign convention: the denominator's lexicographically first term is
        // positive, so products of (1 - q^a t^b) display unchanged.
        if den.terms.values().next().map(|c| c.is_negative()).unwrap_or(false) {
            num = num.neg();
            den = den.neg();
        }
        Ok(RatFuncQT { num, den })
    }

    pub fn from_poly(p: PolyQT) -> Self {
        Self::new(p, PolyQT::one())
    }

    pub fn zero() -> Self {
        Self::from_poly(PolyQT::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(PolyQT::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(PolyQT::from_int(n))
    }

    pub fn num(&self) -> &PolyQT {
        &self.num
    }

    pub fn den(&self) -> &PolyQT {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> Self {
        RatFuncQT { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        Self::checked_new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Exact substitution of `t`; the resulting Laurent-polynomial division
    /// must be exact and the substituted denominator must not vanish.
    pub fn eval_t(&self, at: TPoint) -> Result<LaurentQ, ExactError> {
        let (n, d) = match at {
            TPoint::Zero => (self.num.eval_t0(), self.den.eval_t0()),
            TPoint::Q => (self.num.eval_tq(), self.den.eval_tq()),
        };
        if d.is_zero() {
            return Err(ExactError::VanishingDenominator);
        }
        n.exact_div(&d).ok_or(ExactError::NonExactDivision)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "num": self.num.to_json(), "den": self.den.to_json() })
    }
}

/// Exact evaluation of a rational function at `t = 0` or `t = q`.
pub fn ratfunc_eval_t(f: &RatFuncQT, at: TPoint) -> Result<LaurentQ, ExactError> {
    f.eval_t(at)
}

impl PartialEq for RatFuncQT {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RatFuncQT {}

impl fmt::Display for RatFuncQT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

// ---------------------------------------------------------------------------
// TruncSeriesQinv
// ---------------------------------------------------------------------------

/// Truncated power series in `q^{-1}` with a monomial shift.
///
/// A value with order `N`, shift `s`, and coefficients `c_0..c_N` represents
/// `q^s (c_0 + c_1 q^{-1} + ... + c_N q^{-N})`; its coefficients are exact
/// for all `q`-exponents in the window `[s-N, s]`, zero above `s`, and
/// unknown below `s-N`. Sums align to the larger shift (the discarded
/// low-order terms were outside the sum's exact window anyway) and products
/// add shifts, so the order `N` is preserved by both operations.
#[derive(Debug, Clone, Eq)]
pub struct TruncSeriesQinv {
    order: i64,
    shift: i64,
    /// Coefficient of `q^{shift - k}` keyed by `k` in `0..=order`.
    coeffs: BTreeMap<i64, Rat>,
}

impl TruncSeriesQinv {
    pub fn zero(order: i64) -> Self {
        assert!(order >= 0);
        TruncSeriesQinv { order, shift: 0, coeffs: BTreeMap::new() }
    }

    pub fn one(order: i64) -> Self {
        Self::constant(order, Rat::one())
    }

    pub fn constant(order: i64, c: Rat) -> Self {
        let mut s = Self::zero(order);
        if !c.is_zero() {
            s.coeffs.insert(0, c);
        }
        s
    }

    /// Interpret a Laurent polynomial with nonpositive exponents as a
    /// truncated series (terms below `q^{-order}` are dropped).
    pub fn from_laurent(p: &LaurentQ, order: i64) -> Result<Self, ExactError> {
        let mut s = Self::zero(order);
        for (e, c) in p.terms() {
            if *e > 0 {
                return Err(ExactError::PositiveExponent(*e));
            }
            let k = -e;
            if k <= order {
                s.coeffs.insert(k, c.clone());
            }
        }
        Ok(s)
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^{-k}` relative to the shift.
    pub fn coeff(&self, k: i64) -> Rat {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficient at an absolute `q`-exponent, `None` below the window.
    pub fn coeff_at_qexp(&self, e: i64) -> Option<Rat> {
        if e > self.shift {
            Some(Rat::zero())
        } else if e < self.shift - self.order {
            None
        } else {
            Some(self.coeff(self.shift - e))
        }
    }

    /// Multiply by the monomial `q^delta` (adjusts the shift only).
    pub fn mul_q_power(&self, delta: i64) -> Self {
        let mut out = self.clone();
        out.shift += delta;
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "series order mismatch");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let shift = self.shift.max(other.shift);
        let mut out = TruncSeriesQinv { order: self.order, shift, coeffs: BTreeMap::new() };
        for part in [self, other] {
            let offset = shift - part.shift;
            for (k, c) in &part.coeffs {
                let kk = k + offset;
                if kk <= out.order {
                    let entry = out.coeffs.entry(kk).or_insert_with(Rat::zero);
                    *entry += c;
                }
            }
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        out
    }

    pub fn neg(&self) -> Self {
        TruncSeriesQinv {
            order: self.order,
            shift: self.shift,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "series order mismatch");
        let mut out = TruncSeriesQinv {
            order: self.order,
            shift: self.shift + other.shift,
            coeffs: BTreeMap::new(),
        };
        if self.is_zero() || other.is_zero() {
            out.shift = 0;
            return out;
        }
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &other.coeffs {
                let k = k1 + k2;
                if k <= out.order {
                    let entry = out.coeffs.entry(k).or_insert_with(Rat::zero);
                    *entry += c1 * c2;
                }
            }
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        out
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero(self.order);
        }
        TruncSeriesQinv {
            order: self.order,
            shift: self.shift,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c * r)).collect(),
        }
    }

    /// JSON form: shift plus the coefficient list of `q^{-k}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order,
            "shift": self.shift,
            "coeffs": self.coeffs.iter()
                .map(|(k, c)| serde_json::json!({"k": k, "coef": rat_string(c)}))
                .collect::<Vec<_>>(),
        })
    }
}

impl PartialEq for TruncSeriesQinv {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() && other.is_zero() {
            return self.order == other.order;
        }
        self.order == other.order && self.shift == other.shift && self.coeffs == other.coeffs
    }
}

impl fmt::Display for TruncSeriesQinv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.coeffs {
            let e = self.shift - k;
            let var = match e {
                0 => String::new(),
                1 => "q".to_string(),
                e => format!("q^{}", e),
            };
            fmt_coeff_var(f, c, &var, first)?;
            first = false;
        }
        write!(f, " + O(q^{})", self.shift - self.order - 1)
    }
}

/// Expand `prod_r (1 - q^{-e_r})^{-1}` as a truncated series in `q^{-1}`.
///
/// The coefficient of `q^{-k}` counts multipartitions of `k` whose r-th
/// component uses only the part size `e_r`; for exponents `{1..m}` this is
/// the number of partitions of `k` with parts of size at most `m`.
pub fn geometric_inverse(factor_exponents: &[u64], order: i64) -> Result<TruncSeriesQinv, ExactError> {
    let mut out = TruncSeriesQinv::one(order);
    for &e in factor_exponents {
        if e == 0 {
            return Err(ExactError::GeometricZeroExponent);
        }
        let mut geom = TruncSeriesQinv::zero(order);
        let mut k = 0i64;
        while k <= order {
            geom.coeffs.insert(k, Rat::one());
            k += e as i64;
        }
        out = out.mul(&geom);
    }
    Ok(out)
}
