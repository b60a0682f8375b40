use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::symgroup::Permutation;

/// A basis vector `|σ_0⟩ ⊗ ⋯ ⊗ |σ_{k−1}⟩` of `C[S_n]^{⊗k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorBasisState {
    perms: Vec<Permutation>,
}

impl TensorBasisState {
    pub fn new(perms: Vec<Permutation>) -> Result<Self> {
        if let Some(first) = perms.first() {
            let n = first.degree();
            if let Some(bad) = perms.iter().find(|p| p.degree() != n) {
                return Err(Error::DegreeMismatch { expected: n, got: bad.degree() });
            }
        }
        Ok(TensorBasisState { perms })
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    /// Packed index `Σ_f rank(σ_f)·(n!)^f`.
    pub fn index(&self) -> usize {
        let Some(first) = self.perms.first() else { return 0 };
        let nf = factorial(first.degree()) as usize;
        self.perms.iter().rev().fold(0, |acc, p| acc * nf + p.rank())
    }

    pub fn from_index(n: usize, k: usize, mut idx: usize) -> Result<Self> {
        let nf = factorial(n) as usize;
        if idx >= tensor_dim(n, k)? {
            return Err(Error::InvalidPermutation(format!("basis index {idx} out of range")));
        }
        let mut perms = Vec::with_capacity(k);
        for _ in 0..k {
            perms.push(Permutation::unrank(n, idx % nf)?);
            idx /= nf;
        }
        Ok(TensorBasisState { perms })
    }
}

impl fmt::Display for TensorBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.perms.iter().map(|p| p.to_string()).collect();
        write!(f, "|{}⟩", parts.join(" ⊗ "))
    }
}

/// `(n!)^k`, or a bound error if it does not fit in `usize`.
pub fn tensor_dim(n: usize, k: usize) -> Result<usize> {
    factorial(n)
        .checked_pow(k as u32)
        .and_then(|d| usize::try_from(d).ok())
        .ok_or_else(|| Error::bound(format!("(n!)^k for n = {n}, k = {k}"), usize::MAX as u64))
}

/// A vector in `C[S_n]^{⊗k}` with rational amplitudes.
///
/// Stored as integer numerators over one positive common denominator, with
/// the fraction fully reduced, so structural equality is vector equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVector {
    n: usize,
    k: usize,
    den: BigInt,
    num: BTreeMap<usize, BigInt>,
}

impl StateVector {
    pub fn zero(n: usize, k: usize) -> Self {
        StateVector { n, k, den: BigInt::one(), num: BTreeMap::new() }
    }

    pub fn basis(n: usize, k: usize, idx: usize) -> Result<Self> {
        if idx >= tensor_dim(n, k)? {
            return Err(Error::InvalidPermutation(format!("basis index {idx} out of range")));
        }
        let mut num = BTreeMap::new();
        num.insert(idx, BigInt::one());
        Ok(StateVector { n, k, den: BigInt::one(), num })
    }

    pub fn from_basis_state(b: &TensorBasisState) -> Self {
        let n = b.perms.first().map_or(0, Permutation::degree);
        let mut num = BTreeMap::new();
        num.insert(b.index(), BigInt::one());
        StateVector { n, k: b.perms.len(), den: BigInt::one(), num }
    }

    /// Builds a vector from `(index, amplitude)` pairs; repeated indices add.
    pub fn from_amplitudes(n: usize, k: usize, amps: impl IntoIterator<Item = (usize, BigRational)>) -> Result<Self> {
        let dim = tensor_dim(n, k)?;
        let amps: Vec<(usize, BigRational)> = amps.into_iter().collect();
        if let Some((i, _)) = amps.iter().find(|(i, _)| *i >= dim) {
            return Err(Error::InvalidPermutation(format!("basis index {i} out of range")));
        }
        let den = amps.iter().fold(BigInt::one(), |acc, (_, a)| acc.lcm(a.denom()));
        let entries: Vec<(usize, BigInt)> =
            amps.into_iter().map(|(i, a)| (i, a.numer() * (&den / a.denom()))).collect();
        Ok(Self::from_scaled(n, k, den, entries))
    }

    /// `(1/den) Σ num_i e_i`; normalizes on construction.
    pub(crate) fn from_scaled(
        n: usize,
        k: usize,
        den: BigInt,
        entries: impl IntoIterator<Item = (usize, BigInt)>,
    ) -> Self {
        let mut num: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (i, v) in entries {
            *num.entry(i).or_default() += v;
        }
        num.retain(|_, v| !v.is_zero());
        let mut s = StateVector { n, k, den, num };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        assert!(!self.den.is_zero(), "zero denominator");
        if self.num.is_empty() {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for v in self.num.values() {
            if g.is_one() {
                break;
            }
            g = g.gcd(v);
        }
        if self.den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            self.den = &self.den / &g;
            for v in self.num.values_mut() {
                *v = &*v / &g;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        tensor_dim(self.n, self.k).expect("dimension checked at construction")
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Number of nonzero amplitudes.
    pub fn support_len(&self) -> usize {
        self.num.len()
    }

    pub fn amplitude(&self, idx: usize) -> BigRational {
        self.num.get(&idx).map_or_else(BigRational::zero, |v| BigRational::new(v.clone(), self.den.clone()))
    }

    pub fn amplitude_of(&self, b: &TensorBasisState) -> BigRational {
        self.amplitude(b.index())
    }

    /// Nonzero amplitudes in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, BigRational)> + '_ {
        self.num.iter().map(|(&i, v)| (i, BigRational::new(v.clone(), self.den.clone())))
    }

    pub(crate) fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub(crate) fn numerators(&self) -> &BTreeMap<usize, BigInt> {
        &self.num
    }

    fn check_compatible(&self, other: &StateVector) -> Result<()> {
        if (self.n, self.k) != (other.n, other.k) {
            return Err(Error::SizeMismatch(format!(
                "state in C[S_{}]^{} vs C[S_{}]^{}",
                self.n, self.k, other.n, other.k
            )));
        }
        Ok(())
    }

    /// Real inner product.
    pub fn dot(&self, other: &StateVector) -> Result<BigRational> {
        self.check_compatible(other)?;
        let (small, large) = if self.num.len() <= other.num.len() { (self, other) } else { (other, self) };
        let s: BigInt = small.num.iter().filter_map(|(i, a)| large.num.get(i).map(|b| a * b)).sum();
        Ok(BigRational::new(s, &self.den * &other.den))
    }

    pub fn norm_sq(&self) -> BigRational {
        let s: BigInt = self.num.values().map(|v| v * v).sum();
        BigRational::new(s, &self.den * &self.den)
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: &BigRational, other: &StateVector, b: &BigRational) -> Result<StateVector> {
        self.check_compatible(other)?;
        // common denominator D = lcm(a.den·self.den, b.den·other.den)
        let da = a.denom() * &self.den;
        let db = b.denom() * &other.den;
        let den = da.lcm(&db);
        let fa = a.numer() * (&den / &da);
        let fb = b.numer() * (&den / &db);
        let entries = self
            .num
            .iter()
            .map(|(&i, v)| (i, v * &fa))
            .chain(other.num.iter().map(|(&i, v)| (i, v * &fb)))
            .collect::<Vec<_>>();
        Ok(Self::from_scaled(self.n, self.k, den, entries))
    }

    pub fn add(&self, other: &StateVector) -> Result<StateVector> {
        self.combine(&BigRational::one(), other, &BigRational::one())
    }

    pub fn sub(&self, other: &StateVector) -> Result<StateVector> {
        self.combine(&BigRational::one(), other, &-BigRational::one())
    }

    pub fn scale(&self, s: &BigRational) -> StateVector {
        if s.is_zero() {
            return StateVector::zero(self.n, self.k);
        }
        let entries = self.num.iter().map(|(&i, v)| (i, v * s.numer())).collect::<Vec<_>>();
        Self::from_scaled(self.n, self.k, &self.den * s.denom(), entries)
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match TensorBasisState::from_index(self.n, self.k, i) {
                Ok(b) => write!(f, "({a}){b}")?,
                Err(_) => write!(f, "({a})#{i}")?,
            }
        }
        Ok(())
    }
}
