//! Irreducible representations `[λ]` in Young's seminormal form, and exact
//! dimensions of invariant subspaces under subgroups of `S_n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::combinatorics::{enumerate_syt, Partition, Tableau};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::symgroup::{enumerate_subgroup, IndexedGroup, Permutation, SubgroupDescriptor, INDEXED_GROUP_MAX_N};

/// Largest tensor dimension [`invariant_dim`] will average over.
pub const INVARIANT_MAX_DIM: usize = 5000;

/// `[λ]` with basis the standard tableaux of shape `λ` (in
/// [`enumerate_syt`] order) and one matrix per adjacent transposition.
#[derive(Clone, Debug)]
pub struct SpechtRep {
    lambda: Partition,
    basis: Vec<Tableau>,
    /// `generators[k]` is the matrix of `s_k = (k+1, k+2)` (0-based `k`),
    /// stored as its nonzero entries `(row, col, value)`.
    generators: Vec<Vec<(usize, usize, BigRational)>>,
}

fn content(pos: (usize, usize)) -> i64 {
    pos.1 as i64 - pos.0 as i64
}

/// Seminormal matrices for every `s_k`.
///
/// With `D` the axial distance `c(k+1) - c(k)` in tableau `T` (contents
/// `col - row`): if swapping `k, k+1` breaks standardness the entry is
/// `1/D = ±1`; otherwise `(T, T')` carries the block
/// `[[1/D, 1 - 1/D²], [1, -1/D]]`, where `T` is the tableau of the pair with
/// `k+1` strictly below `k`.
pub fn build_seminormal(lambda: &Partition) -> SpechtRep {
    let n = lambda.size();
    let basis = enumerate_syt(lambda);
    let lookup: std::collections::HashMap<Vec<usize>, usize> =
        basis.iter().enumerate().map(|(i, t)| (t.reading_word(), i)).collect();

    let mut generators = Vec::with_capacity(n.saturating_sub(1));
    for k in 1..n {
        let mut entries = Vec::new();
        for (t, tab) in basis.iter().enumerate() {
            let a = tab.position(k).expect("label present");
            let b = tab.position(k + 1).expect("label present");
            let axial = content(b) - content(a);
            let inv_d = BigRational::new(BigInt::from(1), BigInt::from(axial));
            let adjacent = a.0 == b.0 || a.1 == b.1;
            if adjacent {
                entries.push((t, t, inv_d));
                continue;
            }
            let swapped: Vec<usize> = tab
                .reading_word()
                .into_iter()
                .map(|e| {
                    if e == k {
                        k + 1
                    } else if e == k + 1 {
                        k
                    } else {
                        e
                    }
                })
                .collect();
            let t2 = lookup[&swapped];
            entries.push((t, t, inv_d.clone()));
            // column t holds ρ(s_k) e_t
            if b.0 > a.0 {
                entries.push((t2, t, BigRational::one()));
            } else {
                entries.push((t2, t, BigRational::one() - &inv_d * &inv_d));
            }
        }
        generators.push(entries);
    }
    SpechtRep { lambda: lambda.clone(), basis, generators }
}

impl SpechtRep {
    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn basis(&self) -> &[Tableau] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self) -> usize {
        self.lambda.size()
    }

    /// Dense matrix of `s_k` (0-based `k`).
    pub fn generator_matrix(&self, k: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.dim(), self.dim());
        for (i, j, v) in &self.generators[k] {
            m.set(*i, *j, v.clone());
        }
        m
    }

    /// `m · ρ(s_k)`, using the sparsity of the generator.
    fn right_mul_generator(&self, m: &RatMatrix, k: usize) -> RatMatrix {
        let d = self.dim();
        let mut out = RatMatrix::zeros(d, d);
        for (gi, gj, v) in &self.generators[k] {
            for r in 0..d {
                let a = m.get(r, *gi);
                if !a.is_zero() {
                    let cur = out.get(r, *gj) + a * v;
                    out.set(r, *gj, cur);
                }
            }
        }
        out
    }

    /// `ρ(π)` as the product of generator matrices along the bubble-sort
    /// factorization of `π`.
    pub fn rep_matrix(&self, pi: &Permutation) -> Result<RatMatrix> {
        if pi.degree() != self.degree() {
            return Err(Error::DegreeMismatch { expected: self.degree(), got: pi.degree() });
        }
        let mut m = RatMatrix::identity(self.dim());
        for k in pi.adjacent_factorization() {
            m = self.right_mul_generator(&m, k);
        }
        Ok(m)
    }

    /// `ρ(g)` for every `g ∈ S_n`, indexed like [`IndexedGroup`]. Built by
    /// breadth-first search over the Cayley graph, one sparse product per
    /// element.
    pub fn all_matrices(&self, group: &IndexedGroup) -> Vec<RatMatrix> {
        assert_eq!(group.degree(), self.degree());
        let n = self.degree();
        let mut table: Vec<Option<RatMatrix>> = vec![None; group.order()];
        table[0] = Some(RatMatrix::identity(self.dim()));
        let gens: Vec<usize> = (0..n.saturating_sub(1)).map(|k| group.index_of(&Permutation::adjacent(n, k))).collect();
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &x in &frontier {
                for (k, &g) in gens.iter().enumerate() {
                    let y = group.mul(x, g);
                    if table[y].is_none() {
                        let m = self.right_mul_generator(table[x].as_ref().unwrap(), k);
                        table[y] = Some(m);
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        table.into_iter().map(Option::unwrap).collect()
    }
}

/// Dimension of the `G`-invariant subspace of `[λ_1] ⊗ ⋯ ⊗ [λ_r]`, with `G`
/// acting diagonally on every factor.
///
/// Averages the tensor action over `G` into `P`, checks `P² = P`, and returns
/// the exact rank after checking it equals the exact trace.
pub fn invariant_dim(reps: &[&SpechtRep], group: &SubgroupDescriptor) -> Result<u64> {
    let n = group.degree();
    if let Some(bad) = reps.iter().find(|r| r.degree() != n) {
        return Err(Error::DegreeMismatch { expected: n, got: bad.degree() });
    }
    let dim: usize = reps.iter().map(|r| r.dim()).product();
    if dim > INVARIANT_MAX_DIM {
        return Err(Error::bound(format!("invariant space of dimension {dim}"), INVARIANT_MAX_DIM as u64));
    }
    let elements = enumerate_subgroup(group);

    let indexed = if n <= INDEXED_GROUP_MAX_N { Some(IndexedGroup::new(n)?) } else { None };
    let tables: Option<Vec<Vec<RatMatrix>>> =
        indexed.as_ref().map(|g| reps.iter().map(|r| r.all_matrices(g)).collect());

    let mut sum = RatMatrix::zeros(dim, dim);
    for g in &elements {
        let mut term: Option<RatMatrix> = None;
        for (i, rep) in reps.iter().enumerate() {
            let m = match (&tables, &indexed) {
                (Some(t), Some(ig)) => t[i][ig.index_of(g)].clone(),
                _ => rep.rep_matrix(g)?,
            };
            term = Some(match term {
                None => m,
                Some(acc) => acc.kron(&m),
            });
        }
        sum.add_assign(&term.unwrap_or_else(|| RatMatrix::identity(1)));
    }
    sum.scale(&BigRational::new(BigInt::one(), BigInt::from(elements.len())));

    if sum.mul(&sum) != sum {
        return Err(Error::Consistency(format!("group average over {group} is not idempotent")));
    }
    let rank = sum.rank() as u64;
    let trace = sum.trace();
    if !trace.is_integer() || trace.to_integer().to_u64() != Some(rank) {
        return Err(Error::Consistency(format!("rank {rank} != trace {trace}")));
    }
    Ok(rank)
}
