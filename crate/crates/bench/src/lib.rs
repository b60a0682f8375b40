//! Fixed inputs for the criterion benches.

use kronlab::combinatorics::enumerate_partitions;
use kronlab::Partition;

/// Hook shapes `(n−1, 1)` used as mid-sized benchmark inputs.
pub fn hook(n: usize) -> Partition {
    Partition::new(vec![n - 1, 1]).expect("n >= 2")
}

/// Every triple of partitions of `n`, in sweep order.
pub fn triples(n: usize) -> Vec<(Partition, Partition, Partition)> {
    let ps = enumerate_partitions(n);
    let mut out = Vec::new();
    for a in &ps {
        for b in &ps {
            for c in &ps {
                out.push((a.clone(), b.clone(), c.clone()));
            }
        }
    }
    out
}
