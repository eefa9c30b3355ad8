use std::collections::HashSet;

/// Chance-corrected overlap of two subsets of `{0..n}`:
///
/// ```text
/// (n |S & S'| - |S||S'|) / (n min(|S|,|S'|) - |S||S'|)
/// ```
///
/// Returns 0 whenever the denominator vanishes (either set empty or full, or
/// the minimum size times `n` equals the product of sizes). Inputs are
/// treated as sets; duplicates are ignored.
pub fn consistency_index(s: &[usize], s_prime: &[usize], n: usize) -> f64 {
    let a: HashSet<usize> = s.iter().copied().collect();
    let b: HashSet<usize> = s_prime.iter().copied().collect();
    debug_assert!(a.iter().chain(&b).all(|&i| i < n));
    let (ka, kb) = (a.len() as f64, b.len() as f64);
    let nf = n as f64;
    if a.is_empty() || b.is_empty() || a.len() >= n || b.len() >= n {
        return 0.0;
    }
    let overlap = a.intersection(&b).count() as f64;
    let denom = nf * ka.min(kb) - ka * kb;
    if denom == 0.0 {
        return 0.0;
    }
    (nf * overlap - ka * kb) / denom
}

/// Mean of [`consistency_index`] over all unordered pairs of `sets`.
/// Fewer than two sets give 0.
pub fn mean_consistency(sets: &[Vec<usize>], n: usize) -> f64 {
    let k = sets.len();
    if k < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            total += consistency_index(&sets[i], &sets[j], n);
        }
    }
    total / (k * (k - 1) / 2) as f64
}
