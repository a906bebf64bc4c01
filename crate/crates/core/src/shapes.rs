//! Partitions, horizontal strips, and Gaussian binomials.

use crate::exactring::LaurentQ;
use std::fmt;
use std::str::FromStr;

/// An integer partition stored as its nonzero parts in weakly decreasing
/// order. Trailing zeros supplied to the constructor are dropped, so two
/// partitions are equal exactly when their part lists agree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    /// Build from a weakly decreasing list of parts; trailing zeros are
    /// removed. Panics when the list increases anywhere.
    pub fn new(parts: &[u64]) -> Self {
        for w in parts.windows(2) {
            assert!(w[0] >= w[1], "parts must be weakly decreasing: {:?}", parts);
        }
        let mut parts = parts.to_vec();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts.
    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// The i-th part with 1-based indexing, zero beyond the length.
    pub fn part(&self, i: usize) -> u64 {
        if i >= 1 && i <= self.parts.len() {
            self.parts[i - 1]
        } else {
            0
        }
    }

    /// Whether `self` contains `other` as a Young diagram.
    pub fn contains(&self, other: &Partition) -> bool {
        (1..=other.len()).all(|i| self.part(i) >= other.part(i))
    }

    /// Conjugate (transposed) partition.
    pub fn conjugate(&self) -> Partition {
        let m = self.part(1) as usize;
        let parts: Vec<u64> = (1..=m)
            .map(|c| self.parts.iter().filter(|&&p| p >= c as u64).count() as u64)
            .collect();
        Partition::new(&parts)
    }

    /// Number of columns of the diagram in row `i` minus row `i+1`, i.e. the
    /// multiplicity data used for difference products.
    pub fn diff(&self, i: usize) -> u64 {
        self.part(i) - self.part(i + 1)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}

impl FromStr for Partition {
    type Err = String;

    /// Accepts `"2,1"`, `"(2,1)"`, `"[2,1]"`, or `""` / `"()"` for the
    /// empty partition.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .trim_start_matches(['(', '['])
            .trim_end_matches([')', ']'])
            .trim();
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for tok in inner.split(',') {
            let p: u64 = tok
                .trim()
                .parse()
                .map_err(|_| format!("bad partition part {:?}", tok))?;
            parts.push(p);
        }
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(format!("parts must be weakly decreasing: {:?}", parts));
            }
        }
        Ok(Partition::new(&parts))
    }
}

/// Whether `outer / inner` is a horizontal strip: the diagrams must be
/// nested and interlace, `outer_i >= inner_i >= outer_{i+1}`.
pub fn is_horizontal_strip(outer: &Partition, inner: &Partition) -> bool {
    if !outer.contains(inner) {
        return false;
    }
    (1..=outer.len()).all(|i| inner.part(i) >= outer.part(i + 1))
}

/// All partitions `mu` with at most `max_len` parts such that
/// `outer / mu` is a horizontal strip, in decreasing lexicographic order.
///
/// Empty result exactly when `outer` has more than `max_len + 1` parts.
pub fn horizontal_strips(outer: &Partition, max_len: usize) -> Vec<Partition> {
    if outer.len() > max_len + 1 {
        return Vec::new();
    }
    let rows = outer.len().min(max_len);
    let mut out = Vec::new();
    let mut current = vec![0u64; rows];
    fn descend(outer: &Partition, rows: usize, i: usize, current: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if i == rows {
            out.push(Partition::new(current));
            return;
        }
        // Interlacing bounds: outer_{i+2} <= mu_{i+1} <= outer_{i+1} using
        // 1-based parts, plus weak decrease against the previous chosen part.
        let hi = outer.part(i + 1).min(if i == 0 { u64::MAX } else { current[i - 1] });
        let lo = outer.part(i + 2);
        let mut v = hi;
        loop {
            current[i] = v;
            descend(outer, rows, i + 1, current, out);
            if v == lo {
                break;
            }
            v -= 1;
        }
    }
    descend(outer, rows, 0, &mut current, &mut out);
    out
}

/// All partitions of `n` with at most `max_len` parts, in decreasing
/// lexicographic order.
pub fn partitions_of(n: u64, max_len: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current: Vec<u64> = Vec::new();
    fn descend(remaining: u64, max_part: u64, slots: usize, current: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::new(current));
            return;
        }
        if slots == 0 {
            return;
        }
        let hi = remaining.min(max_part);
        for v in (1..=hi).rev() {
            current.push(v);
            descend(remaining - v, v, slots - 1, current, out);
            current.pop();
        }
    }
    descend(n, n, max_len, &mut current, &mut out);
    out
}

/// All partitions of size at most `n` with at most `max_len` parts,
/// ordered by size then decreasing lexicographic.
pub fn partitions_up_to(n: u64, max_len: usize) -> Vec<Partition> {
    (0..=n).flat_map(|m| partitions_of(m, max_len)).collect()
}

/// Gaussian binomial coefficient `[m choose r]_q` as a polynomial in `q`,
/// computed from its defining ratio
/// `prod_{j=0}^{r-1} (1 - q^{m-j}) / prod_{j=1}^{r} (1 - q^j)`
/// with the division checked to be exact. Panics when `r < 0` or `r > m`.
pub fn q_binomial(m: i64, r: i64) -> LaurentQ {
    assert!(r >= 0 && r <= m, "q_binomial({}, {}) out of range", m, r);
    let mut num = LaurentQ::one();
    let mut den = LaurentQ::one();
    for j in 0..r {
        num = num.mul(&LaurentQ::one().sub(&LaurentQ::q_power(m - j)));
        den = den.mul(&LaurentQ::one().sub(&LaurentQ::q_power(j + 1)));
    }
    num.exact_div(&den).expect("Gaussian binomial ratio must divide exactly")
}
