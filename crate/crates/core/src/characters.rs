//! Irreducible characters of `S_n` via the Murnaghan–Nakayama rule.
//!
//! Rim hooks are removed on the beta-set (abacus) of `λ`: removing an
//! `r`-hook moves a bead from position `b` to the empty position `b - r`, with
//! sign `(-1)^(beads strictly between)`. The largest cycle is stripped first.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{enumerate_partitions, factorial, hook_dimension, Partition};
use crate::error::{Error, Result};
use crate::symgroup::{centralizer_order, class_size};

/// Practical upper bound on `n` for full character tables.
pub const CHARACTER_TABLE_MAX_N: usize = 12;

type MemoKey = (Vec<usize>, Vec<usize>);

fn memo() -> &'static RwLock<HashMap<MemoKey, i64>> {
    static MEMO: OnceLock<RwLock<HashMap<MemoKey, i64>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `χ_λ(ρ)` for a cycle type `ρ` with `|ρ| = |λ|`.
pub fn mn_character(lambda: &Partition, rho: &Partition) -> Result<i64> {
    if lambda.size() != rho.size() {
        return Err(Error::SizeMismatch(format!(
            "character χ_{lambda}({rho}): sizes {} and {}",
            lambda.size(),
            rho.size()
        )));
    }
    Ok(mn_rec(lambda.parts(), rho.parts()))
}

fn mn_rec(lambda: &[usize], rho: &[usize]) -> i64 {
    let Some((&r, rest)) = rho.split_first() else {
        return if lambda.is_empty() { 1 } else { 0 };
    };
    if rest.is_empty() {
        // a single rim hook of length |λ| exists only for hooks (a, 1^b)
        return single_hook_sign(lambda, r);
    }
    let key = (lambda.to_vec(), rho.to_vec());
    if let Some(&v) = memo().read().unwrap().get(&key) {
        return v;
    }

    let len = lambda.len();
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let mut total = 0i64;
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut next = beta.clone();
        next[i] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let shape: Vec<usize> = next.iter().enumerate().map(|(j, &x)| x - (len - 1 - j)).filter(|&p| p > 0).collect();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * mn_rec(&shape, rest);
    }

    memo().write().unwrap().insert(key, total);
    total
}

fn single_hook_sign(lambda: &[usize], r: usize) -> i64 {
    let n: usize = lambda.iter().sum();
    if n != r {
        return 0;
    }
    let is_hook = lambda.iter().skip(1).all(|&p| p == 1);
    if !is_hook {
        return 0;
    }
    if (lambda.len() - 1) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A conjugacy class of `S_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    #[serde(rename = "type")]
    pub cycle_type: Partition,
    pub size: u64,
}

/// The complete integer character table of `S_n`. Rows (irreducibles) and
/// columns (classes) are both in reverse-lexicographic partition order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    n: usize,
    partitions: Vec<Partition>,
    classes: Vec<ClassInfo>,
    values: Vec<Vec<i64>>,
    index: HashMap<Partition, usize>,
}

impl CharacterTable {
    /// Computes the table without touching any cache.
    pub fn compute(n: usize) -> Result<Self> {
        if n == 0 || n > CHARACTER_TABLE_MAX_N {
            return Err(Error::bound(format!("character table of S_{n}"), CHARACTER_TABLE_MAX_N as u64));
        }
        let partitions = enumerate_partitions(n);
        let classes: Vec<ClassInfo> =
            partitions.iter().map(|rho| ClassInfo { cycle_type: rho.clone(), size: class_size(rho) as u64 }).collect();
        let values = partitions
            .par_iter()
            .map(|lambda| partitions.iter().map(|rho| mn_rec(lambda.parts(), rho.parts())).collect::<Vec<_>>())
            .collect();
        Ok(Self::from_parts(n, partitions, classes, values))
    }

    fn from_parts(n: usize, partitions: Vec<Partition>, classes: Vec<ClassInfo>, values: Vec<Vec<i64>>) -> Self {
        let index = partitions.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        CharacterTable { n, partitions, classes, values, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Irreducible labels, which double as class labels.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn row(&self, lambda_idx: usize) -> &[i64] {
        &self.values[lambda_idx]
    }

    /// `χ_λ(ρ)` by table indices.
    #[inline]
    pub fn value_at(&self, lambda_idx: usize, class_idx: usize) -> i64 {
        self.values[lambda_idx][class_idx]
    }

    pub fn value(&self, lambda: &Partition, rho: &Partition) -> Result<i64> {
        let (Some(l), Some(r)) = (self.index_of(lambda), self.index_of(rho)) else {
            return Err(Error::SizeMismatch(format!("χ_{lambda}({rho}) not in table for S_{}", self.n)));
        };
        Ok(self.values[l][r])
    }

    /// Row and column orthogonality, plus `χ_λ(1^n) = d(λ)`, all exact.
    pub fn validate(&self) -> Result<()> {
        let nfact = factorial(self.n) as i128;
        let k = self.partitions.len();
        if self.values.len() != k || self.values.iter().any(|r| r.len() != k) || self.classes.len() != k {
            return Err(Error::Consistency("character table has wrong shape".into()));
        }
        for (i, lambda) in self.partitions.iter().enumerate() {
            let id_col = k - 1;
            if self.values[i][id_col] != hook_dimension(lambda) as i64 {
                return Err(Error::Consistency(format!("χ_{lambda}(1^n) != d({lambda})")));
            }
            for j in 0..k {
                let s: i128 = (0..k)
                    .map(|c| self.classes[c].size as i128 * (self.values[i][c] * self.values[j][c]) as i128)
                    .sum();
                let expected = if i == j { nfact } else { 0 };
                if s != expected {
                    return Err(Error::Consistency(format!("row orthogonality fails at ({i},{j})")));
                }
            }
        }
        for c in 0..k {
            for c2 in 0..k {
                let s: i128 = (0..k).map(|i| (self.values[i][c] * self.values[i][c2]) as i128).sum();
                let expected = if c == c2 { centralizer_order(&self.classes[c].cycle_type) as i128 } else { 0 };
                if s != expected {
                    return Err(Error::Consistency(format!("column orthogonality fails at ({c},{c2})")));
                }
            }
        }
        Ok(())
    }

    fn to_file(&self) -> CacheFile {
        CacheFile {
            n: self.n,
            classes: self.classes.clone(),
            rows: self
                .partitions
                .iter()
                .zip(&self.values)
                .map(|(p, v)| CacheRow { partition: p.clone(), values: v.clone() })
                .collect(),
        }
    }

    fn from_file(file: CacheFile) -> Result<Self> {
        let partitions: Vec<Partition> = file.rows.iter().map(|r| r.partition.clone()).collect();
        if partitions != enumerate_partitions(file.n) {
            return Err(Error::Cache("row labels are not the partitions of n in order".into()));
        }
        let values = file.rows.into_iter().map(|r| r.values).collect();
        let table = Self::from_parts(file.n, partitions, file.classes, values);
        table.validate()?;
        Ok(table)
    }
}

/// Character table from the in-process memo, computing it on first use.
pub fn character_table(n: usize) -> Result<Arc<CharacterTable>> {
    let tables = tables();
    if let Some(t) = tables.read().unwrap().get(&n) {
        return Ok(Arc::clone(t));
    }
    let table = Arc::new(CharacterTable::compute(n)?);
    tables.write().unwrap().entry(n).or_insert_with(|| Arc::clone(&table));
    Ok(table)
}

fn tables() -> &'static RwLock<HashMap<usize, Arc<CharacterTable>>> {
    static TABLES: OnceLock<RwLock<HashMap<usize, Arc<CharacterTable>>>> = OnceLock::new();
    TABLES.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Fills the in-process memo for `n` through [`load_or_build`], so later
/// [`character_table`] calls reuse the on-disk table.
pub fn preload(n: usize, cache: &CacheConfig) -> Result<CacheStatus> {
    if tables().read().unwrap().contains_key(&n) {
        return Ok(CacheStatus::Loaded);
    }
    let (table, status) = load_or_build(n, cache)?;
    tables().write().unwrap().entry(n).or_insert_with(|| Arc::new(table));
    Ok(status)
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    n: usize,
    classes: Vec<ClassInfo>,
    rows: Vec<CacheRow>,
}

#[derive(Serialize, Deserialize)]
struct CacheRow {
    partition: Partition,
    values: Vec<i64>,
}

/// Environment variable naming the on-disk cache directory.
pub const CACHE_ENV: &str = "KRONLAB_CACHE";
pub const DEFAULT_CACHE_DIR: &str = "./.kronlab-cache";

/// Where (and whether) character tables are persisted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheConfig {
    pub dir: PathBuf,
    pub enabled: bool,
}

impl CacheConfig {
    /// `$KRONLAB_CACHE`, falling back to `./.kronlab-cache`.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
        CacheConfig { dir, enabled: true }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        CacheConfig { dir: dir.into(), enabled: true }
    }

    pub fn disabled() -> Self {
        CacheConfig { dir: PathBuf::from(DEFAULT_CACHE_DIR), enabled: false }
    }

    pub fn path_for(&self, n: usize) -> PathBuf {
        self.dir.join(format!("chartable-{n}.json"))
    }
}

/// How [`load_or_build`] obtained its table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Loaded,
    Computed,
    /// The file existed but failed to parse or validate and was overwritten.
    Rebuilt,
    Disabled,
}

/// Loads the table for `n` from disk (re-validated by orthogonality), or
/// computes and writes it. A corrupt file is recomputed and overwritten.
pub fn load_or_build(n: usize, cache: &CacheConfig) -> Result<(CharacterTable, CacheStatus)> {
    if !cache.enabled {
        return Ok((CharacterTable::compute(n)?, CacheStatus::Disabled));
    }
    let path = cache.path_for(n);
    let mut status = CacheStatus::Computed;
    if path.exists() {
        match read_table(&path, n) {
            Ok(t) => return Ok((t, CacheStatus::Loaded)),
            Err(_) => status = CacheStatus::Rebuilt,
        }
    }
    let table = CharacterTable::compute(n)?;
    write_table(&path, &table)?;
    Ok((table, status))
}

fn read_table(path: &Path, n: usize) -> Result<CharacterTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    let file: CacheFile = serde_json::from_str(&text).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    if file.n != n {
        return Err(Error::Cache(format!("{} holds n = {}", path.display(), file.n)));
    }
    CharacterTable::from_file(file)
}

fn write_table(path: &Path, table: &CharacterTable) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::Cache(format!("{}: {e}", parent.display())))?;
    }
    let text = serde_json::to_string_pretty(&table.to_file()).map_err(|e| Error::Cache(e.to_string()))?;
    fs::write(path, text).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::transpose;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn trivial_and_sign() {
        for n in 1..=7 {
            for rho in enumerate_partitions(n) {
                assert_eq!(mn_character(&Partition::row(n), &rho).unwrap(), 1);
                assert_eq!(mn_character(&Partition::column(n), &rho).unwrap(), rho.sign());
            }
        }
    }

    #[test]
    fn s3_table() {
        let t = character_table(3).unwrap();
        assert_eq!(t.row(0), &[1, 1, 1]);
        assert_eq!(t.row(1), &[-1, 0, 2]);
        assert_eq!(t.row(2), &[1, -1, 1]);
        assert_eq!(t.value(&p("2,1"), &p("3")).unwrap(), -1);
        assert_eq!(t.value(&p("2,1"), &p("1,1,1")).unwrap(), 2);
        assert_eq!(t.value(&p("2,1"), &p("2,1")).unwrap(), 0);
    }

    #[test]
    fn small_tables_validate() {
        assert_eq!(character_table(1).unwrap().row(0), &[1]);
        for n in 1..=8 {
            character_table(n).unwrap().validate().unwrap();
        }
        assert_eq!(character_table(5).unwrap().partitions().len(), 7);
    }

    #[test]
    fn transpose_twist() {
        for n in 1..=8 {
            for lambda in enumerate_partitions(n) {
                for rho in enumerate_partitions(n) {
                    let a = mn_character(&transpose(&lambda), &rho).unwrap();
                    let b = rho.sign() * mn_character(&lambda, &rho).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(mn_character(&p("2,1"), &p("2")).is_err());
        assert!(CharacterTable::compute(0).is_err());
        assert!(CharacterTable::compute(CHARACTER_TABLE_MAX_N + 1).is_err());
    }

    #[test]
    fn cache_roundtrip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = CacheConfig::at(dir.path());
        let (t1, s1) = load_or_build(5, &cfg).unwrap();
        assert_eq!(s1, CacheStatus::Computed);
        let (t2, s2) = load_or_build(5, &cfg).unwrap();
        assert_eq!(s2, CacheStatus::Loaded);
        assert_eq!(t1, t2);

        // flip one value: orthogonality check must reject the file
        let path = cfg.path_for(5);
        let mut file: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        file["rows"][1]["values"][0] = serde_json::json!(7);
        fs::write(&path, file.to_string()).unwrap();
        let (t3, s3) = load_or_build(5, &cfg).unwrap();
        assert_eq!(s3, CacheStatus::Rebuilt);
        assert_eq!(t3, t1);
        assert_eq!(load_or_build(5, &cfg).unwrap().1, CacheStatus::Loaded);

        fs::write(&path, "not json").unwrap();
        assert_eq!(load_or_build(5, &cfg).unwrap().1, CacheStatus::Rebuilt);
        assert_eq!(load_or_build(5, &CacheConfig::disabled()).unwrap().1, CacheStatus::Disabled);
    }
}
