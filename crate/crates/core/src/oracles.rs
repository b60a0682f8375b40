//! Classical reference values for Kronecker and plethysm coefficients.
//!
//! These are the ground truth the projector pipelines are checked against.
//! Every division here is exact in theory; a nonzero remainder is reported as
//! [`Error::Consistency`] instead of being rounded.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::characters::character_table;
use crate::combinatorics::{factorial, hook_dimension, Partition};
use crate::error::{Error, Result};
use crate::specht::{build_seminormal, invariant_dim};
use crate::symgroup::{enumerate_subgroup, SubgroupDescriptor};

/// Which computation produced a coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Class sum of character products.
    Character,
    /// Average of `χ_λ` over an explicitly enumerated wreath product.
    Wreath,
    /// Rank of the group-averaged tensor action on Specht modules.
    Specht,
    /// Exhaustive diagonal of the projector pipeline.
    Dense,
    /// Closed-form trace of the projector pipeline.
    Collapsed,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Character => "char",
            Method::Wreath => "wreath",
            Method::Specht => "specht",
            Method::Dense => "dense",
            Method::Collapsed => "collapsed",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "char" | "character" => Ok(Method::Character),
            "wreath" => Ok(Method::Wreath),
            "specht" => Ok(Method::Specht),
            "dense" => Ok(Method::Dense),
            "collapsed" => Ok(Method::Collapsed),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

/// Parameters a coefficient was computed for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientInputs {
    Kron { lambda: Partition, mu: Partition, nu: Partition },
    Pleth { d: usize, m: usize, lambda: Partition },
}

/// A multiplicity together with how and how fast it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientResult {
    pub value: u64,
    pub method: Method,
    pub inputs: CoefficientInputs,
    pub millis: u64,
}

pub(crate) fn check_same_size(parts: &[&Partition]) -> Result<usize> {
    let n = parts[0].size();
    if parts.iter().any(|p| p.size() != n) {
        let sizes: Vec<String> = parts.iter().map(|p| format!("|{p}| = {}", p.size())).collect();
        return Err(Error::SizeMismatch(sizes.join(", ")));
    }
    Ok(n)
}

pub(crate) fn kron_inputs(lambda: &Partition, mu: &Partition, nu: &Partition) -> CoefficientInputs {
    CoefficientInputs::Kron { lambda: lambda.clone(), mu: mu.clone(), nu: nu.clone() }
}

/// Converts `num / den` to `u64`, failing unless the division is exact and
/// the result nonnegative.
pub(crate) fn exact_quotient(num: &BigInt, den: &BigInt, what: &str) -> Result<u64> {
    let (q, r) = num.div_rem(den);
    if !r.is_zero() {
        return Err(Error::Consistency(format!("{what}: {num}/{den} is not an integer")));
    }
    q.to_u64().ok_or_else(|| Error::Consistency(format!("{what}: {q} is negative or too large")))
}

/// `k(λ,μ,ν) = (1/n!) Σ_ρ |C_ρ| χ_λ(ρ) χ_μ(ρ) χ_ν(ρ)`.
pub fn kron_char(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<CoefficientResult> {
    let start = Instant::now();
    let n = check_same_size(&[lambda, mu, nu])?;
    let value = if n == 0 {
        1
    } else {
        let t = character_table(n)?;
        let (a, b, c) = (t.index_of(lambda).unwrap(), t.index_of(mu).unwrap(), t.index_of(nu).unwrap());
        let sum: i128 = t
            .classes()
            .iter()
            .enumerate()
            .map(|(r, cls)| {
                cls.size as i128 * t.value_at(a, r) as i128 * t.value_at(b, r) as i128 * t.value_at(c, r) as i128
            })
            .sum();
        exact_quotient(&BigInt::from(sum), &BigInt::from(factorial(n)), "kron_char")?
    };
    Ok(CoefficientResult {
        value,
        method: Method::Character,
        inputs: kron_inputs(lambda, mu, nu),
        millis: start.elapsed().as_millis() as u64,
    })
}

/// `d(λ) d(μ) d(ν) k(λ,μ,ν)`.
pub fn scaled_kron(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<u64> {
    let k = kron_char(lambda, mu, nu)?.value;
    Ok(hook_dimension(lambda) * hook_dimension(mu) * hook_dimension(nu) * k)
}

/// `a_λ(d, m)`: the average of `χ_λ` over `S_m ≀ S_d`.
pub fn pleth_wreath(d: usize, m: usize, lambda: &Partition) -> Result<CoefficientResult> {
    let start = Instant::now();
    let n = m * d;
    if lambda.size() != n {
        return Err(Error::SizeMismatch(format!("|{lambda}| = {} but md = {n}", lambda.size())));
    }
    let inputs = CoefficientInputs::Pleth { d, m, lambda: lambda.clone() };
    if n == 0 {
        return Ok(CoefficientResult { value: 1, method: Method::Wreath, inputs, millis: 0 });
    }
    let table = character_table(n)?;
    let row = table.index_of(lambda).unwrap();
    let group = enumerate_subgroup(&SubgroupDescriptor::Wreath { m, d });
    let mut census: HashMap<Partition, i128> = HashMap::new();
    for w in &group {
        *census.entry(w.cycle_type()).or_default() += 1;
    }
    let sum: i128 =
        census.iter().map(|(rho, count)| count * table.value_at(row, table.index_of(rho).unwrap()) as i128).sum();
    let value = exact_quotient(&BigInt::from(sum), &BigInt::from(group.len()), "pleth_wreath")?;
    Ok(CoefficientResult { value, method: Method::Wreath, inputs, millis: start.elapsed().as_millis() as u64 })
}

/// Largest `d(λ) d(μ) d(ν)` accepted by [`kron_invariant_def`].
pub const KRON_INVARIANT_MAX_DIM: u64 = 5000;

/// `dim([λ] ⊗ [μ] ⊗ [ν])^{S_n}` computed from explicit seminormal matrices.
pub fn kron_invariant_def(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<CoefficientResult> {
    let start = Instant::now();
    let n = check_same_size(&[lambda, mu, nu])?;
    let dim = hook_dimension(lambda) * hook_dimension(mu) * hook_dimension(nu);
    if dim > KRON_INVARIANT_MAX_DIM {
        return Err(Error::bound(format!("d(λ)d(μ)d(ν) = {dim}"), KRON_INVARIANT_MAX_DIM));
    }
    let reps = [build_seminormal(lambda), build_seminormal(mu), build_seminormal(nu)];
    let refs: Vec<_> = reps.iter().collect();
    let value = invariant_dim(&refs, &SubgroupDescriptor::DiagonalFull { n, factors: vec![0, 1, 2] })?;
    Ok(CoefficientResult {
        value,
        method: Method::Specht,
        inputs: kron_inputs(lambda, mu, nu),
        millis: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::enumerate_partitions;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn k(a: &str, b: &str, c: &str) -> u64 {
        kron_char(&p(a), &p(b), &p(c)).unwrap().value
    }

    #[test]
    fn kron_examples() {
        assert_eq!(k("3", "3", "3"), 1);
        assert_eq!(k("2,1", "2,1", "2,1"), 1);
        assert_eq!(k("2,1", "3", "1,1,1"), 0);
        for n in 1..=5 {
            for l in enumerate_partitions(n) {
                for m in enumerate_partitions(n) {
                    let expected = u64::from(l == m);
                    assert_eq!(kron_char(&l, &m, &Partition::row(n)).unwrap().value, expected);
                }
            }
        }
        assert!(kron_char(&p("2"), &p("2"), &p("3")).is_err());
    }

    #[test]
    fn kron_by_brute_force_over_s3() {
        // (1/6) Σ_π χ_(2,1)(π)^3
        let sum: i64 = crate::symgroup::all_permutations(3)
            .iter()
            .map(|pi| crate::characters::mn_character(&p("2,1"), &crate::symgroup::cycle_type(pi)).unwrap().pow(3))
            .sum();
        assert_eq!(sum, 6);
        assert_eq!(k("2,1", "2,1", "2,1"), 1);
    }

    #[test]
    fn scaled_kron_examples() {
        assert_eq!(scaled_kron(&p("3"), &p("3"), &p("3")).unwrap(), 1);
        assert_eq!(scaled_kron(&p("2,1"), &p("2,1"), &p("2,1")).unwrap(), 8);
        assert_eq!(scaled_kron(&p("2,1"), &p("2,1"), &p("3")).unwrap(), 4);
    }

    #[test]
    fn pleth_examples() {
        for m in 1..=5 {
            for lambda in enumerate_partitions(m) {
                let expected = u64::from(lambda == Partition::row(m));
                assert_eq!(pleth_wreath(1, m, &lambda).unwrap().value, expected);
            }
        }
        let a = |s: &str| pleth_wreath(2, 2, &p(s)).unwrap().value;
        assert_eq!(a("4"), 1);
        assert_eq!(a("3,1"), 0);
        assert_eq!(a("2,2"), 1);
        assert_eq!(a("2,1,1"), 0);
        assert_eq!(a("1,1,1,1"), 0);
        assert!(pleth_wreath(2, 2, &p("3")).is_err());
    }

    #[test]
    fn pleth_by_hand_census() {
        // wreath S_2 ≀ S_2 census {1^4:1, (2,1,1):2, (2,2):3, (4):2}
        let t = character_table(4).unwrap();
        for lambda in enumerate_partitions(4) {
            let chi = |r: &str| t.value(&lambda, &p(r)).unwrap();
            let s = chi("1,1,1,1") + 2 * chi("2,1,1") + 3 * chi("2,2") + 2 * chi("4");
            assert_eq!(s % 8, 0);
            assert_eq!((s / 8) as u64, pleth_wreath(2, 2, &lambda).unwrap().value);
        }
    }

    #[test]
    fn invariant_definition_examples() {
        let kd = |a: &str, b: &str, c: &str| kron_invariant_def(&p(a), &p(b), &p(c)).unwrap().value;
        assert_eq!(kd("1,1", "1,1", "2"), 1);
        assert_eq!(kd("2,1", "2,1", "2,1"), 1);
        assert_eq!(kd("2,2", "2,2", "2,2"), 1);
        assert_eq!(kd("2,1", "3", "1,1,1"), 0);
    }

    #[test]
    fn result_json_shape() {
        let r = kron_char(&p("2,1"), &p("2,1"), &p("2,1")).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["value"], 1);
        assert_eq!(v["method"], "character");
        assert_eq!(v["inputs"]["lambda"], "2,1");
        assert!(v["millis"].is_u64());
        let back: CoefficientResult = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
