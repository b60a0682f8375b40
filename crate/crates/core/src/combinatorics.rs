//! Partitions, Young diagrams, tableaux and Kostka numbers.
//!
//! Partitions are always listed in reverse-lexicographic order, e.g. for
//! `n = 4`: `(4), (3,1), (2,2), (2,1,1), (1,1,1,1)`. Every table indexed by
//! partitions elsewhere in the crate (character tables, class lists, sweep
//! reports) uses this order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `n!` as a `u128`. Exact for `n <= 34`.
pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Validates `parts` (weakly decreasing, all positive).
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    /// Sorts `parts` decreasingly and drops zeros; used for cycle types.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The one-row partition `(n)`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Partition::empty()
        } else {
            Partition(vec![n])
        }
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Self {
        Partition(vec![1; n])
    }

    /// The rectangle `(m^d)`.
    pub fn rectangle(m: usize, d: usize) -> Self {
        if m == 0 {
            Partition::empty()
        } else {
            Partition(vec![m; d])
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Part `i` (0-based), or 0 past the end.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Partition {
        transpose(self)
    }

    /// Cells `(row, col)` in row-major order, 0-based.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
    }

    /// Hook length of cell `(row, col)`.
    pub fn hook(&self, row: usize, col: usize) -> usize {
        let arm = self.0[row] - col - 1;
        let leg = self.0.iter().skip(row + 1).take_while(|&&p| p > col).count();
        arm + leg + 1
    }

    /// `(-1)^(n - len)`, the sign of any permutation with this cycle type.
    pub fn sign(&self) -> i64 {
        if (self.size() - self.len()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Multiplicities `m_i` of each part size `i` (index 0 unused).
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.part(0) + 1];
        for &p in &self.0 {
            m[p] += 1;
        }
        m
    }

    /// Whether the Young diagram of `self` fits inside that of `other`.
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        self.len() <= other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses comma-separated decimal parts such as `"5,3"`. The empty
    /// string is the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim().parse::<usize>().map_err(|e| Error::Parse(format!("bad partition part {p:?} in {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `λ^T_i = |{j : λ_j >= i}|`.
pub fn transpose(lambda: &Partition) -> Partition {
    let width = lambda.part(0);
    let parts = (1..=width).map(|i| lambda.0.iter().filter(|&&p| p >= i).count()).collect();
    Partition(parts)
}

/// Row-wise bit encoding of the Young diagram: `n - 1` characters, the
/// character after box `i` (counting boxes row by row, first to last) is
/// `'1'` iff a row ends there.
pub fn encode_diagram(lambda: &Partition) -> Result<String> {
    let n = lambda.size();
    if n == 0 {
        return Err(Error::InvalidPartition("cannot encode the empty diagram".into()));
    }
    let mut bits = String::with_capacity(n - 1);
    for (r, &len) in lambda.0.iter().enumerate() {
        for c in 0..len {
            let last_box = r + 1 == lambda.len() && c + 1 == len;
            if !last_box {
                bits.push(if c + 1 == len { '1' } else { '0' });
            }
        }
    }
    Ok(bits)
}

/// Inverse of [`encode_diagram`].
pub fn decode_diagram(bits: &str) -> Result<Partition> {
    let mut parts = Vec::new();
    let mut row = 1;
    for ch in bits.chars() {
        match ch {
            '0' => row += 1,
            '1' => {
                parts.push(row);
                row = 1;
            }
            other => return Err(Error::Parse(format!("diagram bit {other:?} is not 0/1"))),
        }
    }
    parts.push(row);
    Partition::new(parts)
}

/// All partitions of `n`, reverse-lexicographic. `n = 0` yields `[()]`.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            prefix.push(p);
            rec(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// `d(λ) = n! / ∏ hooks`, the number of standard tableaux of shape `λ`.
pub fn hook_dimension(lambda: &Partition) -> u64 {
    let hooks: BigUint = lambda.cells().map(|(r, c)| BigUint::from(lambda.hook(r, c))).product();
    let nfact: BigUint = (1..=lambda.size()).map(BigUint::from).product();
    (nfact / hooks).to_u64().expect("dimension fits in u64")
}

/// Dimension of the irreducible polynomial `GL_N` representation of type `λ`:
/// `∏ (N + col - row) / hook(row, col)` over the cells. Zero when `ℓ(λ) > N`.
pub fn schur_dim_gl(lambda: &Partition, big_n: usize) -> u128 {
    if lambda.len() > big_n {
        return 0;
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (r, c) in lambda.cells() {
        num *= BigUint::from(big_n + c - r);
        den *= BigUint::from(lambda.hook(r, c));
    }
    debug_assert!((&num % &den).is_zero());
    (num / den).to_u128().expect("dimension fits in u128")
}

/// Whether `λ \ μ` is a horizontal strip: `μ ⊆ λ` and every column gains at
/// most one box.
pub fn is_horizontal_strip(mu: &Partition, lambda: &Partition) -> bool {
    if !mu.is_contained_in(lambda) {
        return false;
    }
    let (lt, mt) = (transpose(lambda), transpose(mu));
    (0..lt.len()).all(|i| lt.part(i) - mt.part(i) <= 1)
}

/// A filling of a Young diagram with positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    /// Builds a tableau from its rows; the shape is read off the row lengths.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(Vec::len).collect())?;
        Ok(Tableau { shape, rows })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn entry(&self, row: usize, col: usize) -> usize {
        self.rows[row][col]
    }

    /// Rows weakly increase, columns strictly increase.
    pub fn is_semistandard(&self) -> bool {
        let rows_ok = self.rows.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1]));
        let cols_ok = self.rows.windows(2).all(|pair| pair[1].iter().zip(&pair[0]).all(|(below, above)| below > above));
        rows_ok && cols_ok && self.rows.iter().flatten().all(|&e| e >= 1)
    }

    /// Semistandard with entries exactly `1..=n`.
    pub fn is_standard(&self) -> bool {
        let n = self.shape.size();
        let mut seen = vec![false; n + 1];
        for &e in self.rows.iter().flatten() {
            if e == 0 || e > n || seen[e] {
                return false;
            }
            seen[e] = true;
        }
        self.is_semistandard()
    }

    /// Occurrence counts of labels `1..=max_label`.
    pub fn content(&self, max_label: usize) -> Vec<usize> {
        let mut c = vec![0; max_label];
        for &e in self.rows.iter().flatten() {
            if e >= 1 && e <= max_label {
                c[e - 1] += 1;
            }
        }
        c
    }

    /// Entries read row by row, top row first.
    pub fn reading_word(&self) -> Vec<usize> {
        self.rows.iter().flatten().copied().collect()
    }

    /// Position `(row, col)` of `label`, if present.
    pub fn position(&self, label: usize) -> Option<(usize, usize)> {
        self.rows.iter().enumerate().find_map(|(r, row)| row.iter().position(|&e| e == label).map(|c| (r, c)))
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")).collect();
        write!(f, "{}", rows.join(" / "))
    }
}

/// All standard tableaux of shape `λ`, sorted lexicographically by reading
/// word (top row first).
pub fn enumerate_syt(lambda: &Partition) -> Vec<Tableau> {
    fn rec(lambda: &Partition, next: usize, rows: &mut Vec<Vec<usize>>, out: &mut Vec<Tableau>) {
        if next > lambda.size() {
            out.push(Tableau { shape: lambda.clone(), rows: rows.clone() });
            return;
        }
        for r in 0..lambda.len() {
            let len = rows[r].len();
            let fits = len < lambda.part(r) && (r == 0 || rows[r - 1].len() > len);
            if fits {
                rows[r].push(next);
                rec(lambda, next + 1, rows, out);
                rows[r].pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(lambda, 1, &mut vec![Vec::new(); lambda.len()], &mut out);
    out.sort_by_key(Tableau::reading_word);
    out
}

/// Number of semistandard tableaux of shape `λ` and content `μ`.
///
/// Cells are filled column by column (left to right, top to bottom) with a
/// per-label budget taken from `μ`.
pub fn kostka(lambda: &Partition, mu: &Partition) -> Result<u64> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(format!("kostka: |{lambda}| = {} but |{mu}| = {}", lambda.size(), mu.size())));
    }
    let labels = mu.len();
    if lambda.len() > labels {
        return Ok(0);
    }
    let cols = transpose(lambda);
    let cells: Vec<(usize, usize)> = (0..cols.len()).flat_map(|c| (0..cols.part(c)).map(move |r| (r, c))).collect();

    struct Search<'a> {
        lambda: &'a Partition,
        cells: &'a [(usize, usize)],
        grid: Vec<Vec<usize>>,
        budget: Vec<usize>,
        labels: usize,
    }

    impl Search<'_> {
        fn run(&mut self, k: usize) -> u64 {
            let Some(&(r, c)) = self.cells.get(k) else {
                return 1;
            };
            let above = if r > 0 { self.grid[r - 1][c] + 1 } else { 1 };
            let left = if c > 0 { self.grid[r][c - 1] } else { 1 };
            // the cells below in this column need strictly larger labels
            let below = (r + 1..self.lambda.len()).take_while(|&rr| self.lambda.part(rr) > c).count();
            let lo = above.max(left);
            let hi = self.labels.saturating_sub(below);
            let mut total = 0;
            for v in lo..=hi {
                if self.budget[v - 1] == 0 {
                    continue;
                }
                self.budget[v - 1] -= 1;
                self.grid[r][c] = v;
                total += self.run(k + 1);
                self.budget[v - 1] += 1;
            }
            self.grid[r][c] = 0;
            total
        }
    }

    let mut search = Search {
        lambda,
        cells: &cells,
        grid: lambda.parts().iter().map(|&p| vec![0; p]).collect(),
        budget: mu.parts().to_vec(),
        labels,
    };
    Ok(search.run(0))
}
