//! Permutations, conjugacy classes, Young subgroups and the wreath product
//! `S_m ≀ S_d` inside `S_{md}`.
//!
//! Composition is `(a ∘ b)(x) = a(b(x))` everywhere in the crate.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::combinatorics::{factorial, Partition};
use crate::error::{Error, Result};

/// A bijection of `{1..n}` stored as 0-based one-line images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// From 0-based images; validates bijectivity.
    pub fn from_images0(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// From 1-based one-line notation, e.g. `[2, 1, 3]`.
    pub fn from_images1(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation(format!("{images:?} contains 0")));
        }
        Self::from_images0(images.iter().map(|&i| i - 1).collect())
    }

    /// From disjoint cycles in 1-based labels, e.g. `&[&[1, 2, 3]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a == 0 || a > n || b == 0 || b > n || touched[a - 1] {
                    return Err(Error::InvalidPermutation(format!("bad cycle {cycle:?} in S_{n}")));
                }
                touched[a - 1] = true;
                images[a - 1] = b - 1;
            }
        }
        Self::from_images0(images)
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// The adjacent transposition swapping `k` and `k + 1` (0-based `k`).
    pub fn adjacent(n: usize, k: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(k, k + 1);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based image of 0-based `x`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images0(&self) -> &[usize] {
        &self.images
    }

    pub fn images1(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { expected: self.degree(), got: other.degree() });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// Position in the lexicographic order of `S_n` (0-based).
    pub fn rank(&self) -> usize {
        lehmer_rank(&self.images)
    }

    /// Inverse of [`Permutation::rank`].
    pub fn unrank(n: usize, mut rank: usize) -> Result<Self> {
        if rank as u128 >= factorial(n) {
            return Err(Error::InvalidPermutation(format!("rank {rank} out of range for S_{n}")));
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let block = factorial(n - 1 - i) as usize;
            images.push(pool.remove(rank / block));
            rank %= block;
        }
        Ok(Permutation { images })
    }

    pub fn cycle_type(&self) -> Partition {
        cycle_type(self)
    }

    /// Adjacent transpositions `k_1, …, k_r` with
    /// `self = s_{k_1} ∘ s_{k_2} ∘ ⋯ ∘ s_{k_r}`, found by bubble-sorting the
    /// one-line form.
    pub fn adjacent_factorization(&self) -> Vec<usize> {
        let mut line = self.images.clone();
        let mut swaps = Vec::new();
        let n = line.len();
        for pass in 0..n {
            for j in 0..n.saturating_sub(pass + 1) {
                if line[j] > line[j + 1] {
                    line.swap(j, j + 1);
                    swaps.push(j);
                }
            }
        }
        // self ∘ s_{j1} ∘ ⋯ ∘ s_{jr} = id
        swaps.reverse();
        swaps
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> = self.images.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", imgs.join(","))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses 1-based one-line notation, with or without brackets: `"[2,1,3]"`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        if inner.trim().is_empty() {
            return Ok(Permutation::identity(0));
        }
        let images = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("bad permutation entry {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images1(&images)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images1().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::from_images1(&v).map_err(serde::de::Error::custom)
    }
}

pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation> {
    a.compose(b)
}

pub fn inverse(a: &Permutation) -> Permutation {
    a.inverse()
}

/// Sorted cycle lengths.
pub fn cycle_type(pi: &Permutation) -> Partition {
    let n = pi.degree();
    let mut seen = vec![false; n];
    let mut lens = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = pi.apply(x);
            len += 1;
        }
        lens.push(len);
    }
    Partition::from_unsorted(lens)
}

/// `z_ρ = ∏ i^{m_i} m_i!`.
pub fn centralizer_order(rho: &Partition) -> u128 {
    rho.multiplicities().iter().enumerate().skip(1).map(|(i, &m)| (i as u128).pow(m as u32) * factorial(m)).product()
}

/// `n! / z_ρ`.
pub fn class_size(rho: &Partition) -> u128 {
    factorial(rho.size()) / centralizer_order(rho)
}

/// All of `S_n` in lexicographic order of the one-line form.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::with_capacity(factorial(n) as usize);
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(Permutation { images: cur.clone() });
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// The block embedding `φ: S_d → S_{md}`: block `a` of size `m` is moved to
/// block `σ(a)`, i.e. `φ(σ)((a−1)m + b) = (σ(a)−1)m + b`.
pub fn wreath_embed(sigma: &Permutation, m: usize) -> Permutation {
    let d = sigma.degree();
    let mut images = vec![0; m * d];
    for a in 0..d {
        for b in 0..m {
            images[a * m + b] = sigma.apply(a) * m + b;
        }
    }
    Permutation { images }
}

/// Row-major bits of the permutation matrix whose row `i` has its 1 in
/// column `π(i)`.
pub fn encode_permutation(pi: &Permutation) -> String {
    let n = pi.degree();
    let mut bits = String::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            bits.push(if pi.apply(i) == j { '1' } else { '0' });
        }
    }
    bits
}

/// Inverse of [`encode_permutation`]; rejects anything that is not a 0/1
/// permutation matrix.
pub fn decode_permutation(bits: &str) -> Result<Permutation> {
    let len = bits.len();
    let n = (len as f64).sqrt().round() as usize;
    if n * n != len {
        return Err(Error::InvalidPermutation(format!("length {len} is not a square")));
    }
    let bytes = bits.as_bytes();
    let mut images = Vec::with_capacity(n);
    for i in 0..n {
        let row = &bytes[i * n..(i + 1) * n];
        if let Some(bad) = row.iter().find(|&&b| b != b'0' && b != b'1') {
            return Err(Error::Parse(format!("bit {:?} is not 0/1", *bad as char)));
        }
        let ones: Vec<usize> = (0..n).filter(|&j| row[j] == b'1').collect();
        if ones.len() != 1 {
            return Err(Error::InvalidPermutation(format!("row {} has {} ones", i + 1, ones.len())));
        }
        images.push(ones[0]);
    }
    Permutation::from_images0(images)
}

/// A finite subgroup of some `S_n`, enumerated explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubgroupDescriptor {
    /// `S_{μ_1} × S_{μ_2} × ⋯` acting on consecutive blocks.
    Young { shape: Partition },
    /// `S_m ≀ S_d ⊂ S_{md}`.
    Wreath { m: usize, d: usize },
    /// All of `S_n`.
    Full { n: usize },
    /// `S_n` acting diagonally on several tensor factors. As a set of
    /// permutations it is `S_n`; the factors are recorded for audit output.
    DiagonalFull { n: usize, factors: Vec<usize> },
}

impl SubgroupDescriptor {
    pub fn young(shape: Partition) -> Self {
        SubgroupDescriptor::Young { shape }
    }

    pub fn degree(&self) -> usize {
        match self {
            SubgroupDescriptor::Young { shape } => shape.size(),
            SubgroupDescriptor::Wreath { m, d } => m * d,
            SubgroupDescriptor::Full { n } | SubgroupDescriptor::DiagonalFull { n, .. } => *n,
        }
    }

    pub fn order(&self) -> u128 {
        match self {
            SubgroupDescriptor::Young { shape } => shape.parts().iter().map(|&p| factorial(p)).product(),
            SubgroupDescriptor::Wreath { m, d } => factorial(*m).pow(*d as u32) * factorial(*d),
            SubgroupDescriptor::Full { n } | SubgroupDescriptor::DiagonalFull { n, .. } => factorial(*n),
        }
    }

    /// Membership predicate, independent of [`enumerate_subgroup`].
    pub fn contains(&self, pi: &Permutation) -> bool {
        if pi.degree() != self.degree() {
            return false;
        }
        match self {
            SubgroupDescriptor::Young { shape } => {
                let block = block_labels(shape);
                (0..pi.degree()).all(|x| block[pi.apply(x)] == block[x])
            }
            SubgroupDescriptor::Wreath { m, .. } => {
                // blocks of size m must map onto blocks
                (0..pi.degree()).all(|x| {
                    let start = x - x % m;
                    pi.apply(x) / m == pi.apply(start) / m
                })
            }
            SubgroupDescriptor::Full { .. } | SubgroupDescriptor::DiagonalFull { .. } => true,
        }
    }
}

impl fmt::Display for SubgroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupDescriptor::Young { shape } => write!(f, "S_({shape})"),
            SubgroupDescriptor::Wreath { m, d } => write!(f, "S_{m} wr S_{d}"),
            SubgroupDescriptor::Full { n } => write!(f, "S_{n}"),
            SubgroupDescriptor::DiagonalFull { n, factors } => write!(f, "S_{n} diag {factors:?}"),
        }
    }
}

/// Block index of each point for the Young subgroup `S_μ`.
fn block_labels(shape: &Partition) -> Vec<usize> {
    shape.parts().iter().enumerate().flat_map(|(b, &len)| std::iter::repeat(b).take(len)).collect()
}

/// Every element of the subgroup exactly once, in a deterministic order.
pub fn enumerate_subgroup(g: &SubgroupDescriptor) -> Vec<Permutation> {
    match g {
        SubgroupDescriptor::Young { shape } => young_elements(shape),
        SubgroupDescriptor::Wreath { m, d } => {
            let base = young_elements(&Partition::rectangle(*m, *d));
            let mut out = Vec::with_capacity(g.order() as usize);
            for sigma in all_permutations(*d) {
                let phi = wreath_embed(&sigma, *m);
                out.extend(base.iter().map(|y| phi.compose_unchecked(y)));
            }
            out
        }
        SubgroupDescriptor::Full { n } | SubgroupDescriptor::DiagonalFull { n, .. } => all_permutations(*n),
    }
}

fn young_elements(shape: &Partition) -> Vec<Permutation> {
    let n = shape.size();
    let mut out = vec![Permutation::identity(n)];
    let mut offset = 0;
    for &len in shape.parts() {
        let local = all_permutations(len);
        let mut next = Vec::with_capacity(out.len() * local.len());
        for base in &out {
            for l in &local {
                let mut images = base.images.clone();
                for (i, &x) in l.images.iter().enumerate() {
                    images[offset + i] = offset + x;
                }
                next.push(Permutation { images });
            }
        }
        out = next;
        offset += len;
    }
    out
}

/// `S_n` with elements indexed `0..n!` (lexicographic order), plus
/// multiplication, inverse and conjugacy-class tables. Used by the
/// matrix-free projector engine, so only built for small `n`.
#[derive(Debug, Clone)]
pub struct IndexedGroup {
    n: usize,
    order: usize,
    elements: Vec<Permutation>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    class_of: Vec<u16>,
    classes: Vec<Partition>,
}

/// Largest degree for which [`IndexedGroup`] builds a full multiplication table.
pub const INDEXED_GROUP_MAX_N: usize = 6;

impl IndexedGroup {
    pub fn new(n: usize) -> Result<Self> {
        if n > INDEXED_GROUP_MAX_N {
            return Err(Error::bound(format!("indexed S_{n}"), INDEXED_GROUP_MAX_N as u64));
        }
        let elements = all_permutations(n);
        let order = elements.len();
        let classes = crate::combinatorics::enumerate_partitions(n);
        let class_index: HashMap<&Partition, u16> = classes.iter().enumerate().map(|(i, c)| (c, i as u16)).collect();
        let class_of = elements.iter().map(|p| class_index[&cycle_type(p)]).collect();
        let mut mul = vec![0u32; order * order];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                mul[a * order + b] = lehmer_rank(&pa.compose_unchecked(pb).images) as u32;
            }
        }
        let inv = elements.iter().map(|p| lehmer_rank(&p.inverse().images) as u32).collect();
        Ok(IndexedGroup { n, order, elements, mul, inv, class_of, classes })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn element(&self, idx: usize) -> &Permutation {
        &self.elements[idx]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, pi: &Permutation) -> usize {
        lehmer_rank(&pi.images)
    }

    /// Index of `a ∘ b`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// Position of the element's cycle type in reverse-lex partition order.
    #[inline]
    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a] as usize
    }

    pub fn classes(&self) -> &[Partition] {
        &self.classes
    }
}

/// Rank of a 0-based one-line permutation in lexicographic order.
fn lehmer_rank(images: &[usize]) -> usize {
    let n = images.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = images[i + 1..].iter().filter(|&&x| x < images[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}
