//! Independent cross-checks.
//!
//! Everything in this module recomputes a quantity by a route deliberately
//! different from the production code: direct combinatorial counting,
//! recurrences, and brute-force series expansion. Tests compare the two
//! routes; nothing here is called by the production paths.

use crate::exactring::{LaurentQ, PolyQT, Rat};
use crate::shapes::Partition;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Number of ways to write `k` as a nonnegative integer combination
/// `sum_r j_r * e_r` of the given exponents (order of the list fixed,
/// so repeated exponents count as distinct components).
pub fn count_bounded_multipartitions(k: u64, exps: &[u64]) -> u64 {
    let k = k as usize;
    let mut ways = vec![0u64; k + 1];
    ways[0] = 1;
    for &e in exps {
        let e = e as usize;
        assert!(e > 0);
        for v in e..=k {
            ways[v] += ways[v - e];
        }
    }
    ways[k]
}

/// Ordinary binomial coefficient.
pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for j in 0..r {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc as u64
}

/// Horizontal-strip test by cells: the skew diagram `outer / inner` must
/// exist and have at most one cell in every column.
pub fn strip_by_cells(outer: &Partition, inner: &Partition) -> bool {
    if !outer.contains(inner) {
        return false;
    }
    let width = outer.part(1) as usize;
    let mut cells_per_column = vec![0u32; width];
    for i in 1..=outer.len() {
        for c in inner.part(i)..outer.part(i) {
            cells_per_column[c as usize] += 1;
        }
    }
    cells_per_column.iter().all(|&c| c <= 1)
}

/// Gaussian binomial by the Pascal recurrence
/// `[m r] = [m-1 r-1] + q^r [m-1 r]`.
pub fn q_binomial_pascal(m: u64, r: u64) -> LaurentQ {
    let mut row: Vec<LaurentQ> = vec![LaurentQ::one()];
    for _ in 1..=m {
        let mut next = vec![LaurentQ::zero(); row.len() + 1];
        for (j, entry) in next.iter_mut().enumerate() {
            let from_left = if j >= 1 { row.get(j - 1).cloned() } else { None };
            let from_same = row.get(j).map(|p| p.mul_q_power(j as i64));
            *entry = match (from_left, from_same) {
                (Some(a), Some(b)) => a.add(&b),
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => LaurentQ::zero(),
            };
        }
        row = next;
    }
    row[r as usize].clone()
}

/// Contents of all semistandard tableaux of the given straight shape with
/// entries in `1..=n`: a map from content vector (length `n`) to the number
/// of tableaux realizing it. This is the monomial expansion of a Schur
/// polynomial, computed cell by cell.
pub fn ssyt_contents(shape: &Partition, n: usize) -> BTreeMap<Vec<u64>, u64> {
    let mut out = BTreeMap::new();
    if shape.len() > n {
        return out;
    }
    let rows = shape.len();
    let mut grid: Vec<Vec<u32>> = (0..rows).map(|r| vec![0; shape.part(r + 1) as usize]).collect();
    fn fill(
        grid: &mut Vec<Vec<u32>>,
        rows: usize,
        r: usize,
        c: usize,
        n: usize,
        out: &mut BTreeMap<Vec<u64>, u64>,
    ) {
        if r == rows {
            let mut content = vec![0u64; n];
            for row in grid.iter() {
                for &e in row {
                    content[(e - 1) as usize] += 1;
                }
            }
            *out.entry(content).or_insert(0) += 1;
            return;
        }
        if c == grid[r].len() {
            fill(grid, rows, r + 1, 0, n, out);
            return;
        }
        let min_row = if c > 0 { grid[r][c - 1] } else { 1 };
        let min_col = if r > 0 && c < grid[r - 1].len() { grid[r - 1][c] + 1 } else { 1 };
        for e in min_row.max(min_col)..=(n as u32) {
            grid[r][c] = e;
            fill(grid, rows, r, c + 1, n, out);
        }
        grid[r][c] = 0;
    }
    fill(&mut grid, rows, 0, 0, n, &mut out);
    out
}

/// Littlewood-Richardson coefficient by the tableau rule: skew
/// semistandard fillings of `lam / mu` with content `nu` whose reverse
/// reading word is a lattice word.
pub fn lr_lattice_count(lam: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if !lam.contains(mu) || lam.size() != mu.size() + nu.size() {
        return 0;
    }
    let rows = lam.len();
    let maxe = nu.len();
    if nu.is_empty() {
        return if lam == mu { 1 } else { 0 };
    }
    // grid[r][c] holds the entry of cell (r, c); zero marks an unfilled or
    // absent cell. Cells are filled in reverse reading order (each row right
    // to left, rows top to bottom) so the lattice condition can be enforced
    // as the word grows.
    let mut grid: Vec<Vec<u32>> = (0..rows).map(|r| vec![0; lam.part(r + 1) as usize]).collect();
    let mut counts = vec![0u64; maxe + 1];
    let mut remaining: Vec<u64> = (0..=maxe).map(|e| if e == 0 { 0 } else { nu.part(e) }).collect();
    fn fill(
        lam: &Partition,
        mu: &Partition,
        rows: usize,
        maxe: usize,
        r: usize,
        c: i64,
        grid: &mut Vec<Vec<u32>>,
        counts: &mut Vec<u64>,
        remaining: &mut Vec<u64>,
        total: &mut u64,
    ) {
        if r == rows {
            *total += 1;
            return;
        }
        if c < mu.part(r + 1) as i64 {
            fill(lam, mu, rows, maxe, r + 1, lam.part(r + 2) as i64 - 1, grid, counts, remaining, total);
            return;
        }
        let c = c as usize;
        for e in 1..=maxe as u32 {
            if remaining[e as usize] == 0 {
                continue;
            }
            // Weak increase along the row.
            if c + 1 < grid[r].len() && grid[r][c + 1] != 0 && e > grid[r][c + 1] {
                continue;
            }
            // Strict increase down the column (cell above must be a filled
            // skew cell to impose anything).
            if r > 0 && c < grid[r - 1].len() && c >= mu.part(r) as usize && e <= grid[r - 1][c] {
                continue;
            }
            // Lattice condition on the reverse reading word.
            if e > 1 && counts[e as usize] + 1 > counts[e as usize - 1] {
                continue;
            }
            grid[r][c] = e;
            counts[e as usize] += 1;
            remaining[e as usize] -= 1;
            fill(lam, mu, rows, maxe, r, c as i64 - 1, grid, counts, remaining, total);
            remaining[e as usize] += 1;
            counts[e as usize] -= 1;
            grid[r][c] = 0;
        }
    }
    let mut total = 0;
    fill(
        lam,
        mu,
        rows,
        maxe,
        0,
        lam.part(1) as i64 - 1,
        &mut grid,
        &mut counts,
        &mut remaining,
        &mut total,
    );
    total
}

/// Bivariate power series in `(q, t)` truncated at a fixed total degree.
/// Only nonnegative exponents occur; keys with `a + b > max_total` are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncBivar {
    max_total: i64,
    terms: BTreeMap<(i64, i64), Rat>,
}

impl TruncBivar {
    pub fn one(max_total: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0), Rat::one());
        TruncBivar { max_total, terms }
    }

    pub fn zero(max_total: i64) -> Self {
        TruncBivar { max_total, terms: BTreeMap::new() }
    }

    pub fn coeff(&self, a: i64, b: i64) -> Rat {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Rat::zero)
    }

    fn insert_add(&mut self, key: (i64, i64), c: &Rat) {
        if c.is_zero() || key.0 + key.1 > self.max_total {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.max_total, other.max_total);
        let mut out = Self::zero(self.max_total);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.insert_add((a1 + a2, b1 + b2), &(c1 * c2));
            }
        }
        out
    }

    /// Multiply by `1 - q^a t^b`.
    pub fn mul_one_minus(&mut self, a: i64, b: i64) {
        assert!(a >= 0 && b >= 0 && a + b > 0);
        let old: Vec<((i64, i64), Rat)> = self.terms.iter().map(|(k, c)| (*k, c.clone())).collect();
        for ((x, y), c) in old {
            self.insert_add((x + a, y + b), &-c);
        }
    }

    /// Divide by `1 - q^a t^b` (multiply by the geometric series
    /// `1 + q^a t^b + q^{2a} t^{2b} + ...`).
    pub fn div_one_minus(&mut self, a: i64, b: i64) {
        assert!(a >= 0 && b >= 0 && a + b > 0);
        let mut geom = Self::zero(self.max_total);
        let mut x = 0i64;
        let mut y = 0i64;
        while x + y <= self.max_total {
            geom.terms.insert((x, y), Rat::one());
            x += a;
            y += b;
        }
        *self = self.mul(&geom);
    }

    /// Truncate an exact polynomial into this series ring.
    pub fn from_polyqt(p: &PolyQT, max_total: i64) -> Self {
        let mut out = Self::zero(max_total);
        for ((a, b), c) in p.terms() {
            assert!(*a >= 0 && *b >= 0, "oracle series needs nonnegative exponents");
            out.insert_add((*a, *b), &Rat::from_integer(c.clone()));
        }
        out
    }
}

/// Branching-coefficient series by brute force: the classical product
/// formula over pairs `1 <= i <= j <= len(mu)` of ratios of
/// `f(u) = (u t; q)_inf / (u q; q)_inf` at `u = q^alpha t^b`, expanded as a
/// truncated power series factor by factor. Requires `lam / mu` to be a
/// horizontal strip.
pub fn psi_series(lam: &Partition, mu: &Partition, max_total: i64) -> TruncBivar {
    let mut s = TruncBivar::one(max_total);
    let l = mu.len();
    // Apply f(q^alpha t^b)^{sign} factor-wise, truncated.
    let apply_f = |s: &mut TruncBivar, alpha: i64, b: i64, invert: bool| {
        assert!(alpha >= 0, "series arguments stay in nonnegative exponents");
        // Numerator of f: (1 - q^{alpha+i} t^{b+1}) for i >= 0.
        let mut i = 0;
        while alpha + i + b + 1 <= max_total {
            if invert {
                s.div_one_minus(alpha + i, b + 1);
            } else {
                s.mul_one_minus(alpha + i, b + 1);
            }
            i += 1;
        }
        // Denominator of f: (1 - q^{alpha+1+i} t^b) for i >= 0.
        let mut i = 0;
        while alpha + 1 + i + b <= max_total {
            if invert {
                s.mul_one_minus(alpha + 1 + i, b);
            } else {
                s.div_one_minus(alpha + 1 + i, b);
            }
            i += 1;
        }
    };
    for i in 1..=l {
        for j in i..=l {
            let b = (j - i) as i64;
            apply_f(&mut s, (mu.part(i) - mu.part(j)) as i64, b, false);
            apply_f(&mut s, (lam.part(i) - lam.part(j + 1)) as i64, b, false);
            apply_f(&mut s, (lam.part(i) - mu.part(j)) as i64, b, true);
            apply_f(&mut s, (mu.part(i) - lam.part(j + 1)) as i64, b, true);
        }
    }
    s
}
