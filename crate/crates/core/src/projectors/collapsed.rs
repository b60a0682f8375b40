//! Closed-form pipeline trace.
//!
//! Expanding every stage as its group sum, a term of the composed operator
//! acts on factor `i` as `L_{B g A} R_τ`, where `g` comes from the isotypic
//! stage, `A`/`B` are the products of the left elements applied before/after
//! it and `τ` is the right element. On one copy of `C[S_n]`,
//! `tr(L_l R_τ) = z(τ)·[l ∼ τ]`, and summing `χ(g)` over `g` with
//! `B g A ∼ τ` gives `Σ_{h∼τ} χ(h (AB)⁻¹)`. That sum only depends on the
//! classes of `AB` and `τ`, so it is read off a table of class
//! multiplication counts.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use super::{Pipeline, ProjectorSpec, Side};
use crate::characters::character_table;
use crate::combinatorics::{enumerate_partitions, factorial, hook_dimension, Partition};
use crate::error::{Error, Result};
use crate::oracles::exact_quotient;
use crate::symgroup::{all_permutations, centralizer_order, Permutation};

/// Largest `n` accepted by [`pipeline_trace_collapsed`].
pub const COLLAPSED_MAX_N: usize = 8;

/// Cap on the number of left-element tuples summed explicitly.
const MAX_LEFT_TUPLES: u128 = 5_000_000;

/// `counts[c][ρ][κ] = #{h ∈ C_ρ : r_c⁻¹ h ∈ C_κ}` for fixed representatives `r_c`.
struct ClassProducts {
    classes: Vec<Partition>,
    index: HashMap<Partition, usize>,
    counts: Vec<Vec<Vec<u64>>>,
}

fn class_products(n: usize) -> Arc<ClassProducts> {
    static MEMO: OnceLock<Mutex<HashMap<usize, Arc<ClassProducts>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(c) = memo.lock().unwrap().get(&n) {
        return c.clone();
    }
    let classes = enumerate_partitions(n);
    let index: HashMap<Partition, usize> = classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let all = all_permutations(n);
    let class_of: Vec<usize> = all.iter().map(|p| index[&p.cycle_type()]).collect();
    let nc = classes.len();
    let counts = classes
        .iter()
        .map(|c| {
            let rinv = class_representative(c).inverse();
            let mut m = vec![vec![0u64; nc]; nc];
            for (h, &rho) in all.iter().zip(&class_of) {
                m[rho][index[&rinv.compose_unchecked(h).cycle_type()]] += 1;
            }
            m
        })
        .collect();
    let cp = Arc::new(ClassProducts { classes, index, counts });
    memo.lock().unwrap().insert(n, cp.clone());
    cp
}

/// Product of consecutive cycles with the given lengths.
fn class_representative(rho: &Partition) -> Permutation {
    let n = rho.size();
    let mut images: Vec<usize> = (0..n).collect();
    let mut start = 0;
    for &len in rho.parts() {
        for j in 0..len {
            images[start + j] = start + (j + 1) % len;
        }
        start += len;
    }
    Permutation::from_images0(images).expect("valid cycle product")
}

struct LeftStage {
    position: usize,
    factors: Vec<usize>,
    elements: Vec<Permutation>,
}

/// Contracted trace; must agree with the dense backend wherever both run.
///
/// Supported shapes: exactly one isotypic stage per factor; every average
/// acts on one side only; a right average acts on a single factor, and each
/// factor has at most one right average.
pub fn pipeline_trace_collapsed(p: &Pipeline) -> Result<u64> {
    let (n, k) = (p.n(), p.k());
    if n > COLLAPSED_MAX_N {
        return Err(Error::bound(format!("collapsed trace at n = {n}"), COLLAPSED_MAX_N as u64));
    }
    let unsupported = |why: &str| Err(Error::UnsupportedPipeline(format!("{}: {why}", p.label())));

    let mut iso: Vec<Option<(usize, Partition)>> = vec![None; k];
    let mut right: Vec<Option<Vec<Permutation>>> = vec![None; k];
    let mut left: Vec<LeftStage> = Vec::new();
    let mut group_orders = BigInt::from(1);
    for (pos, s) in p.stages().iter().enumerate() {
        match s {
            ProjectorSpec::Isotypic { factor, lambda } => {
                if iso[*factor].replace((pos, lambda.clone())).is_some() {
                    return unsupported("two isotypic stages on one factor");
                }
            }
            ProjectorSpec::InvariantAverage { actions, .. } => {
                let elements = s.acting_elements().expect("average stage");
                group_orders *= elements.len();
                if actions.iter().all(|a| a.side == Side::L) {
                    let mut factors: Vec<usize> = actions.iter().map(|a| a.factor).collect();
                    factors.sort_unstable();
                    factors.dedup();
                    if factors.len() != actions.len() {
                        return unsupported("repeated left action on one factor");
                    }
                    left.push(LeftStage { position: pos, factors, elements });
                } else if actions.len() == 1 {
                    let f = actions[0].factor;
                    if right[f].replace(elements).is_some() {
                        return unsupported("two right averages on one factor");
                    }
                } else {
                    return unsupported("right or mixed action on several factors");
                }
            }
        }
    }
    let iso: Vec<(usize, Partition)> = match iso.into_iter().collect::<Option<Vec<_>>>() {
        Some(v) => v,
        None => return unsupported("a factor without an isotypic stage"),
    };
    let tuples: u128 = left.iter().map(|l| l.elements.len() as u128).product();
    if tuples > MAX_LEFT_TUPLES {
        return Err(Error::bound(format!("{tuples} left-element tuples"), MAX_LEFT_TUPLES as u64));
    }

    let cp = class_products(n);
    let table = character_table(n)?;
    let nc = cp.classes.len();

    // T_i(c) = Σ_ρ cnt_i(ρ) z(ρ) Σ_κ counts[c][ρ][κ] χ_i(κ)
    let t: Vec<Vec<i128>> = (0..k)
        .map(|i| {
            let mut cnt = vec![0u64; nc];
            match &right[i] {
                Some(els) => els.iter().for_each(|e| cnt[cp.index[&e.cycle_type()]] += 1),
                None => cnt[cp.index[&Partition::column(n)]] = 1,
            }
            let row = table.index_of(&iso[i].1).expect("validated partition");
            let chi: Vec<i128> =
                cp.classes.iter().map(|c| table.value_at(row, table.index_of(c).unwrap()) as i128).collect();
            (0..nc)
                .map(|c| {
                    (0..nc)
                        .filter(|&rho| cnt[rho] > 0)
                        .map(|rho| {
                            let s: i128 = (0..nc).map(|kap| cp.counts[c][rho][kap] as i128 * chi[kap]).sum();
                            cnt[rho] as i128 * centralizer_order(&cp.classes[rho]) as i128 * s
                        })
                        .sum()
                })
                .collect()
        })
        .collect();

    // histogram of (class(A_i B_i))_i over all left-element tuples
    let mut hist: HashMap<Vec<usize>, u64> = HashMap::new();
    let mut choice = vec![0usize; left.len()];
    let id = Permutation::identity(n);
    loop {
        let key: Vec<usize> = (0..k)
            .map(|i| {
                let pos = iso[i].0;
                let (mut before, mut after) = (id.clone(), id.clone());
                for (l, &c) in left.iter().zip(&choice) {
                    if l.factors.binary_search(&i).is_ok() {
                        let x = &l.elements[c];
                        if l.position < pos {
                            before = x.compose_unchecked(&before);
                        } else {
                            after = x.compose_unchecked(&after);
                        }
                    }
                }
                cp.index[&before.compose_unchecked(&after).cycle_type()]
            })
            .collect();
        *hist.entry(key).or_default() += 1;
        // mixed-radix increment
        let mut j = 0;
        while j < left.len() {
            choice[j] += 1;
            if choice[j] < left[j].elements.len() {
                break;
            }
            choice[j] = 0;
            j += 1;
        }
        if j == left.len() {
            break;
        }
    }

    let mut sum = BigInt::from(0);
    for (key, count) in &hist {
        let mut term = BigInt::from(*count);
        for (i, &c) in key.iter().enumerate() {
            term *= t[i][c];
        }
        sum += term;
    }
    let dims: BigInt = iso.iter().map(|(_, l)| BigInt::from(hook_dimension(l))).product();
    let den = BigInt::from(factorial(n)).pow(k as u32) * group_orders;
    exact_quotient(&(dims * sum), &den, &format!("collapsed trace of {}", p.label()))
}
