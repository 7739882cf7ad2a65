//! Multiset comparison of spectra.

use num_complex::Complex64;

/// Relative radius of the zero-eigenvalue cluster.
pub const ZERO_CLUSTER_TOL: f64 = 1e-8;

/// Max distance after sorting both lists; infinite when lengths differ.
pub fn real_multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    x.iter().zip(&y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

/// Bottleneck distance: the smallest `d` such that the two multisets can be
/// matched one-to-one with every pair within `d`.
pub fn complex_multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let n = a.len();
    if n == 0 {
        return 0.0;
    }
    let dist: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    let mut candidates: Vec<f64> = dist.iter().flatten().copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(&dist, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

fn perfect_matching(dist: &[Vec<f64>], limit: f64) -> bool {
    let n = dist.len();
    let mut match_b = vec![usize::MAX; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, dist, limit, &mut seen, &mut match_b) {
            return false;
        }
    }
    true
}

fn augment(i: usize, dist: &[Vec<f64>], limit: f64, seen: &mut [bool], match_b: &mut [usize]) -> bool {
    for j in 0..dist.len() {
        if dist[i][j] <= limit && !seen[j] {
            seen[j] = true;
            if match_b[j] == usize::MAX || augment(match_b[j], dist, limit, seen, match_b) {
                match_b[j] = i;
                return true;
            }
        }
    }
    false
}

/// Distance between a multiset and its complex conjugate.
pub fn conjugation_deviation(values: &[Complex64]) -> f64 {
    let conj: Vec<Complex64> = values.iter().map(|z| z.conj()).collect();
    complex_multiset_distance(values, &conj)
}

/// Number of eigenvalues within `ZERO_CLUSTER_TOL · max(1, scale)` of zero.
pub fn zero_cluster_size(values: &[f64], scale: f64) -> usize {
    let radius = ZERO_CLUSTER_TOL * scale.max(1.0);
    values.iter().filter(|v| v.abs() <= radius).count()
}
