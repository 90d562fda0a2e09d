//! Symmetric tridiagonal eigensolvers.
//!
//! `eigh` is an implicit-shift QL iteration with eigenvectors. `sturm_count`
//! and `bisect_eigenvalues` are an independent route to the eigenvalues only,
//! kept for cross-checking.

/// Eigen-decomposition of a symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// `vectors[i]` is the normalized eigenvector of `values[i]`.
    pub vectors: Vec<Vec<f64>>,
}

const MAX_SWEEPS: usize = 64;

/// Diagonalizes the matrix with diagonal `diag` and off-diagonal `off`
/// (`off[i]` couples rows `i` and `i + 1`).
///
/// Eigenvalues come back ascending. Each eigenvector is signed so that its
/// largest-magnitude component (first one on ties) is positive.
pub fn eigh(diag: &[f64], off: &[f64]) -> TridiagEigen {
    let n = diag.len();
    assert_eq!(
        off.len(),
        n.saturating_sub(1),
        "off-diagonal length must be n - 1"
    );
    if n == 0 {
        return TridiagEigen {
            values: vec![],
            vectors: vec![],
        };
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    // z[row][col], columns become eigenvectors
    let mut z = vec![vec![0.0; n]; n];
    for (i, row) in z.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m] == 0.0 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            assert!(sweeps <= MAX_SWEEPS, "QL iteration failed to converge");

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0_f64, 1.0_f64, 0.0_f64);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let mut v: Vec<f64> = z.iter().map(|row| row[k]).collect();
            fix_sign(&mut v);
            v
        })
        .collect();
    TridiagEigen { values, vectors }
}

fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Number of eigenvalues strictly below `x`, from the signs of the LDLᵀ
/// pivots of `T − xI`.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let scale = gershgorin_radius(diag, off).max(f64::MIN_POSITIVE);
    let guard = f64::EPSILON * scale;
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let coupling = if i == 0 {
            0.0
        } else {
            off[i - 1] * off[i - 1] / q
        };
        q = diag[i] - x - coupling;
        if q == 0.0 {
            q = -guard;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin_bounds(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

fn gershgorin_radius(diag: &[f64], off: &[f64]) -> f64 {
    let (lo, hi) = gershgorin_bounds(diag, off);
    lo.abs().max(hi.abs())
}

/// All eigenvalues by bisection on the Sturm count, ascending.
pub fn bisect_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    if n == 0 {
        return vec![];
    }
    let (lo0, hi0) = gershgorin_bounds(diag, off);
    let pad = f64::EPSILON * lo0.abs().max(hi0.abs()) + f64::MIN_POSITIVE;
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (lo0 - pad, hi0 + pad);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sturm_count(diag, off, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn apply(diag: &[f64], off: &[f64], v: &[f64]) -> Vec<f64> {
        let n = diag.len();
        (0..n)
            .map(|i| {
                let mut acc = diag[i] * v[i];
                if i > 0 {
                    acc += off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += off[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    #[test]
    fn one_by_one() {
        let r = eigh(&[3.5], &[]);
        assert_eq!(r.values, vec![3.5]);
        assert_eq!(r.vectors, vec![vec![1.0]]);
        assert_eq!(bisect_eigenvalues(&[3.5], &[]).len(), 1);
    }

    #[test]
    fn two_by_two_quadratic_formula() {
        let (a, b, c) = (1.0, 4.0, -0.7);
        let r = eigh(&[a, b], &[c]);
        let mean = 0.5 * (a + b);
        let rad = (0.25 * (a - b) * (a - b) + c * c).sqrt();
        assert_relative_eq!(r.values[0], mean - rad, max_relative = 1e-15);
        assert_relative_eq!(r.values[1], mean + rad, max_relative = 1e-15);
    }

    #[test]
    fn diagonal_input_keeps_unit_vectors() {
        let r = eigh(&[2.0, -1.0, 5.0], &[0.0, 0.0]);
        assert_eq!(r.values, vec![-1.0, 2.0, 5.0]);
        assert_eq!(r.vectors[0], vec![0.0, 1.0, 0.0]);
        assert_eq!(r.vectors[2], vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn sturm_counts_known_spectrum() {
        // path graph Laplacian-like matrix with eigenvalues 2 - 2cos(kπ/4)
        let d = [2.0, 2.0, 2.0];
        let o = [-1.0, -1.0];
        assert_eq!(sturm_count(&d, &o, 0.0), 0);
        assert_eq!(sturm_count(&d, &o, 1.0), 1);
        assert_eq!(sturm_count(&d, &o, 2.5), 2);
        assert_eq!(sturm_count(&d, &o, 4.0), 3);
    }

    fn tridiag_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (1usize..9).prop_flat_map(|n| {
            (
                prop::collection::vec(-10.0..10.0f64, n),
                prop::collection::vec(-5.0..5.0f64, n - 1),
            )
        })
    }

    proptest! {
        #[test]
        fn residuals_and_orthonormality((d, o) in tridiag_strategy()) {
            let r = eigh(&d, &o);
            let norm = d.iter().chain(o.iter()).fold(0.0f64, |m, x| m.max(x.abs())) * 3.0 + 1e-300;
            for (lam, v) in r.values.iter().zip(&r.vectors) {
                let hv = apply(&d, &o, v);
                let res = hv.iter().zip(v).map(|(a, b)| (a - lam * b).powi(2)).sum::<f64>().sqrt();
                prop_assert!(res <= 1e-12 * norm, "residual {res}");
            }
            for i in 0..d.len() {
                for j in 0..d.len() {
                    let dot: f64 = r.vectors[i].iter().zip(&r.vectors[j]).map(|(a, b)| a * b).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((dot - expect).abs() <= 1e-12);
                }
            }
            prop_assert!(r.values.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn bisection_agrees_with_ql((d, o) in tridiag_strategy()) {
            let ql = eigh(&d, &o).values;
            let bis = bisect_eigenvalues(&d, &o);
            let norm = d.iter().chain(o.iter()).fold(1.0f64, |m, x| m.max(x.abs()));
            for (a, b) in ql.iter().zip(&bis) {
                prop_assert!((a - b).abs() <= 1e-12 * norm);
            }
        }

        #[test]
        fn trace_is_preserved((d, o) in tridiag_strategy()) {
            let sum: f64 = eigh(&d, &o).values.iter().sum();
            let trace: f64 = d.iter().sum();
            prop_assert!((sum - trace).abs() <= 1e-11 * (1.0 + trace.abs() + o.len() as f64 * 5.0));
        }
    }
}
