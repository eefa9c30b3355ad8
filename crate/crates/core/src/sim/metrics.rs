use std::collections::HashSet;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelectionMetrics {
    /// Fraction of causal SNPs selected.
    pub power: f64,
    /// Fraction of selected SNPs that are not causal; 0 for an empty selection.
    pub fdr: f64,
    /// Harmonic mean of power and 1 - fdr; 0 when both vanish.
    pub fscore: f64,
    pub n_selected: usize,
    pub true_positives: usize,
}

/// Power, FDR and F-score of `selected` against `causal`, both subsets of
/// `{0..n}`. Duplicates are ignored.
///
/// # Panics
/// If an index is not below `n`.
pub fn score_selection(selected: &[usize], causal: &[usize], n: usize) -> SelectionMetrics {
    let s: HashSet<usize> = selected.iter().copied().collect();
    let c: HashSet<usize> = causal.iter().copied().collect();
    assert!(
        s.iter().chain(&c).all(|&i| i < n),
        "index out of range for {n} SNPs"
    );
    let tp = s.intersection(&c).count();
    let power = if c.is_empty() {
        0.0
    } else {
        tp as f64 / c.len() as f64
    };
    let fdr = if s.is_empty() {
        0.0
    } else {
        (s.len() - tp) as f64 / s.len() as f64
    };
    let precision = if s.is_empty() { 0.0 } else { 1.0 - fdr };
    let fscore = if power + precision == 0.0 {
        0.0
    } else {
        2.0 * power * precision / (power + precision)
    };
    SelectionMetrics {
        power,
        fdr,
        fscore,
        n_selected: s.len(),
        true_positives: tp,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let causal: Vec<usize> = (0..20).collect();
        let m = score_selection(&causal, &causal, 100);
        assert_eq!((m.power, m.fdr, m.fscore), (1.0, 0.0, 1.0));
        let half: Vec<usize> = (10..30).collect();
        let m = score_selection(&half, &causal, 100);
        assert_eq!((m.power, m.fdr, m.fscore), (0.5, 0.5, 0.5));
        let m = score_selection(&[], &causal, 100);
        assert_eq!((m.power, m.fdr, m.fscore), (0.0, 0.0, 0.0));
    }
}
