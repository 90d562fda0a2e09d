//! Assigning quantum numbers to block eigenpairs by switching the coupling off.
//!
//! The off-diagonal is scaled by λ from 1 down to 0 in S equal steps. At each
//! step every tracked vector is matched to the new eigenvector of largest
//! overlap; at λ = 0 the eigenvectors are bare basis states and their labels
//! are read off. S starts small and doubles until two consecutive schedules
//! give the same assignment.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use crate::error::{ModelError, Result};
use crate::model::HalfInt;

use super::block::{solve_block, BasisState, BlockMatrix};
use super::tridiag;

/// Overlap below which a step-to-step match counts as ambiguous.
pub const OVERLAP_THRESHOLD: f64 = FRAC_1_SQRT_2;
/// Largest ramp tried before giving up.
pub const MAX_RAMP_STEPS: usize = 1 << 14;
const INITIAL_RAMP_STEPS: usize = 8;

/// Eigenpair of a block tagged with the bare state it continues to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledEigenpair {
    /// Lab projection j of the bare state.
    pub j: HalfInt,
    /// Photon number of the bare state.
    pub photons: f64,
    /// Photon number relative to N0.
    pub photon_offset: i64,
    pub energy: f64,
    /// Energy relative to the block reference, erg.
    pub shift: f64,
    /// Expansion coefficients C^(n), in basis order.
    pub coefficients: Vec<f64>,
    pub basis: Vec<BasisState>,
}

impl LabeledEigenpair {
    /// C^(n) for lab projection `n`, if that state is in the basis.
    pub fn coefficient(&self, n: HalfInt) -> Option<f64> {
        self.basis
            .iter()
            .position(|b| b.n == n)
            .map(|i| self.coefficients[i])
    }

    /// ⟨J_z⟩/ħ = Σ_n |C^(n)|² n.
    pub fn jz_expectation(&self) -> f64 {
        self.basis
            .iter()
            .zip(&self.coefficients)
            .map(|(b, c)| c * c * b.n.value())
            .sum()
    }
}

/// Labels every eigenpair of the block, in ascending energy order.
pub fn label_states(block: &BlockMatrix) -> Result<Vec<LabeledEigenpair>> {
    let pairs = solve_block(block);
    let assignment = if block.offdiag.iter().all(|x| *x == 0.0) {
        // bare basis already; eigh keeps unit vectors for a diagonal input
        pairs.iter().map(|p| argmax_abs(&p.vector)).collect()
    } else {
        check_bare_degeneracy(block)?;
        stable_assignment(block)?
    };
    Ok(pairs
        .into_iter()
        .zip(assignment)
        .enumerate()
        .map(|(i, (p, b))| {
            let bare = block.basis[b];
            LabeledEigenpair {
                j: bare.n,
                photons: bare.photons,
                photon_offset: bare.photon_offset,
                energy: block.bare[b] + dressing(block, i, b),
                shift: p.shift,
                coefficients: p.vector,
                basis: block.basis.clone(),
            }
        })
        .collect())
}

/// Eigenvalue `index` measured from the diagonal entry of basis state `b`.
///
/// The block is re-solved with that entry moved to zero, so a dressing much
/// smaller than the block scale is not lost to cancellation.
fn dressing(block: &BlockMatrix, index: usize, b: usize) -> f64 {
    if block.offdiag.iter().all(|x| *x == 0.0) {
        return 0.0;
    }
    let centered: Vec<f64> = block.diag.iter().map(|d| d - block.diag[b]).collect();
    tridiag::eigh(&centered, &block.offdiag).values[index]
}

/// Pair labeled `j` with photon offset 0, the dressed state ψ_{j,N0}.
pub fn find_label(pairs: &[LabeledEigenpair], j: HalfInt) -> Option<&LabeledEigenpair> {
    pairs.iter().find(|p| p.j == j && p.photon_offset == 0)
}

fn argmax_abs(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    best
}

fn check_bare_degeneracy(block: &BlockMatrix) -> Result<()> {
    let tol = 4.0 * f64::EPSILON * block.scale();
    for a in 0..block.dim() {
        for b in a + 1..block.dim() {
            if (block.diag[a] - block.diag[b]).abs() <= tol {
                return Err(ModelError::Labeling {
                    first: a,
                    second: b,
                    steps: 0,
                });
            }
        }
    }
    Ok(())
}

fn stable_assignment(block: &BlockMatrix) -> Result<Vec<usize>> {
    let mut steps = INITIAL_RAMP_STEPS;
    let mut previous: Option<Vec<usize>> = None;
    let mut last_ambiguity = (0, 0);
    loop {
        match ramp(block, steps) {
            Ok(a) => {
                if previous.as_ref() == Some(&a) {
                    return Ok(a);
                }
                previous = Some(a);
            }
            Err(pair) => {
                last_ambiguity = pair;
                previous = None;
            }
        }
        if steps >= MAX_RAMP_STEPS {
            let (first, second) = last_ambiguity;
            return Err(ModelError::Labeling {
                first,
                second,
                steps,
            });
        }
        steps *= 2;
    }
}

/// Tracks the eigenvectors of `block` down to λ = 0 in `steps` steps.
/// Returns, for each eigenpair in ascending order, the basis index it ends on,
/// or the indices of two eigenpairs that could not be told apart.
fn ramp(block: &BlockMatrix, steps: usize) -> std::result::Result<Vec<usize>, (usize, usize)> {
    let start = tridiag::eigh(&block.diag, &block.offdiag);
    let n = block.dim();
    let mut tracked = start.vectors;
    for k in 1..=steps {
        let lambda = 1.0 - k as f64 / steps as f64;
        let off: Vec<f64> = block.offdiag.iter().map(|x| x * lambda).collect();
        let next = tridiag::eigh(&block.diag, &off).vectors;
        let mut taken = vec![None; n];
        let mut moved = Vec::with_capacity(n);
        for (i, v) in tracked.iter().enumerate() {
            let overlaps: Vec<f64> = next.iter().map(|w| dot(v, w).abs()).collect();
            let best = argmax_abs(&overlaps);
            if overlaps[best] < OVERLAP_THRESHOLD {
                let runner_up = (0..n)
                    .filter(|&c| c != best)
                    .max_by(|&a, &b| overlaps[a].total_cmp(&overlaps[b]))
                    .unwrap_or(best);
                return Err((i, runner_up));
            }
            if let Some(other) = taken[best] {
                return Err((other, i));
            }
            taken[best] = Some(i);
            moved.push(next[best].clone());
        }
        tracked = moved;
    }
    Ok(tracked.iter().map(|v| argmax_abs(v)).collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Branch;
    use crate::model::{Particle, PhotonField, Recoil};
    use crate::oracle::block::{build_spin_half_block, build_spin_j_block};
    use crate::units::{self, HBAR};

    fn omega() -> f64 {
        units::wavelength_to_omega(1.0).unwrap()
    }

    fn field(g_over_w: f64, n0: f64, mu: f64) -> PhotonField {
        let w = omega();
        PhotonField::fock(w, n0, (g_over_w * HBAR * w / mu).abs()).unwrap()
    }

    fn particle(mu: f64, j: HalfInt) -> Particle {
        Particle::neutral("test", mu, j, units::NEUTRON_MASS).unwrap()
    }

    #[test]
    fn zero_coupling_reads_basis() {
        let p = particle(0.0, HalfInt::from_twice(3));
        let f = PhotonField::fock(omega(), 50.0, 1.0).unwrap();
        let block = build_spin_j_block(&f, &p, HalfInt::HALF, Recoil::Exact).unwrap();
        let labels = label_states(&block).unwrap();
        for l in &labels {
            let i = block.index_of(l.j).unwrap();
            assert_eq!(l.shift, block.diag[i]);
        }
        assert!(find_label(&labels, HalfInt::HALF).unwrap().shift == 0.0);
    }

    #[test]
    fn spin_half_plus_is_lower() {
        let mu = 1e-20;
        let p = particle(mu, HalfInt::HALF);
        for g in [1e-3, 0.3, 1.0, 3.0] {
            let f = field(g, 10.0, mu);
            let plus = build_spin_half_block(&f, &p, Branch::Plus, Recoil::Exact).unwrap();
            let labels = label_states(&plus).unwrap();
            assert_eq!(labels[0].j, HalfInt::HALF);
            assert_eq!(labels[0].photon_offset, 0);
            let minus = build_spin_half_block(&f, &p, Branch::Minus, Recoil::Exact).unwrap();
            let labels = label_states(&minus).unwrap();
            assert_eq!(labels[1].j, HalfInt::MINUS_HALF);
            assert_eq!(labels[1].photon_offset, 0);
        }
    }

    #[test]
    fn strong_coupling_spin_one_is_stable_under_refinement() {
        let mu = 1e-20;
        let p = particle(mu, HalfInt::from_twice(2));
        let f = field(1.0, 20.0, mu);
        let block = build_spin_j_block(&f, &p, HalfInt::from_twice(0), Recoil::Neglected).unwrap();
        let a = ramp(&block, 256).unwrap();
        let b = ramp(&block, 512).unwrap();
        assert_eq!(a, b);
        let labels = label_states(&block).unwrap();
        let mut js: Vec<i32> = labels.iter().map(|l| l.j.twice()).collect();
        js.sort();
        assert_eq!(js, vec![-2, 0, 2]);
    }

    #[test]
    fn coefficients_are_normalized() {
        let mu = -3e-21;
        let p = particle(mu, HalfInt::from_twice(5));
        let f = field(0.7, 1e3, mu);
        for twice in [-5, -1, 3] {
            let block =
                build_spin_j_block(&f, &p, HalfInt::from_twice(twice), Recoil::Exact).unwrap();
            for l in label_states(&block).unwrap() {
                let norm: f64 = l.coefficients.iter().map(|c| c * c).sum();
                assert!((norm - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_bare_levels_are_reported() {
        let block = BlockMatrix {
            diag: vec![1.0, 1.0],
            offdiag: vec![0.5],
            basis: vec![
                BasisState {
                    n: HalfInt::MINUS_HALF,
                    photons: 1.0,
                    photon_offset: 1,
                },
                BasisState {
                    n: HalfInt::HALF,
                    photons: 0.0,
                    photon_offset: 0,
                },
            ],
            sector: 0.5,
            reference: 0.0,
            bare: vec![1.0, 1.0],
            handedness: Default::default(),
        };
        assert!(matches!(
            label_states(&block),
            Err(ModelError::Labeling { .. })
        ));
    }
}
