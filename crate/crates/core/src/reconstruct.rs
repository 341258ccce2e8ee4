//! Inversion of the sixteen signals into χ(T): design matrix, conditioning
//! diagnostics and least squares under complete positivity.
//!
//! The unknowns are the 16 real parameters of [`ProcessMatrix::from_parameters`],
//! so Hermiticity, trace preservation and ground-state fixity hold by
//! construction. Positivity is imposed on the single-exciton Choi block E and
//! on the ground-gain block G by ADMM with eigenvalue clipping.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{Cholesky, DMatrix, DVector};

use crate::linalg::{min_hermitian_eigenvalue, project_psd, smat, svec};
use crate::process::{parameter_label, Pair, ProcessMatrix, PARAMETER_COUNT, PARAMETER_LAYOUT};
use crate::signal::{ExperimentConfig, ForwardModel, SignalSet, Word};
use crate::{BathParams, Error, ExcitonBasis, GeometryHint, Result};

/// Rows: Re and Im of each of the sixteen signals.
pub const ROW_COUNT: usize = 32;

/// Singular values below this fraction of the largest mark unidentifiable
/// directions.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Linear map from the free parameters to the stacked normalized signals:
/// s = matrix·x + offset.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub matrix: DMatrix<f64>,
    pub offset: DVector<f64>,
    pub normalization: f64,
    pub hint: GeometryHint,
    singular_values: Vec<f64>,
    /// Right singular vectors as columns, ordered like `singular_values`.
    right_vectors: DMatrix<f64>,
    pseudo_inverse: DMatrix<f64>,
}

/// A connected group of rows and parameters. The design matrix is block
/// diagonal up to permutation, with one block per group.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignBlock {
    pub rows: Vec<usize>,
    pub columns: Vec<usize>,
    pub condition_number: f64,
}

impl DesignMatrix {
    /// Wraps an arbitrary 32×16 map (used for synthetic tests).
    pub fn from_parts(matrix: DMatrix<f64>, offset: DVector<f64>, normalization: f64, hint: GeometryHint) -> Self {
        assert_eq!(matrix.ncols(), PARAMETER_COUNT);
        assert_eq!(matrix.nrows(), offset.len());
        let (singular_values, right_vectors, pseudo_inverse) = decompose(&matrix);
        DesignMatrix { matrix, offset, normalization, hint, singular_values, right_vectors, pseudo_inverse }
    }

    pub fn row_label(row: usize) -> String {
        let part = if row % 2 == 0 { "Re" } else { "Im" };
        format!("{part} {}", Word::from_index(row / 2).label())
    }

    pub fn column_label(col: usize) -> String {
        parameter_label(col)
    }

    /// Descending.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn rank(&self) -> usize {
        let max = self.singular_values[0];
        self.singular_values.iter().filter(|s| **s > RANK_TOLERANCE * max).count()
    }

    /// Unit parameter-space directions the signals cannot see.
    pub fn null_space(&self) -> Vec<Vec<f64>> {
        let rank = self.rank();
        (rank..PARAMETER_COUNT).map(|k| self.right_vectors.column(k).iter().copied().collect()).collect()
    }

    pub fn condition_number(&self) -> f64 {
        condition_number(self)
    }

    pub fn pseudo_inverse(&self) -> &DMatrix<f64> {
        &self.pseudo_inverse
    }

    /// Connected components of the bipartite row/parameter graph.
    pub fn blocks(&self) -> Vec<DesignBlock> {
        let scale = self.matrix.amax();
        let threshold = 1e-12 * scale;
        let n = ROW_COUNT.max(self.matrix.nrows()) + PARAMETER_COUNT;
        let nrows = self.matrix.nrows();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for r in 0..nrows {
            for c in 0..PARAMETER_COUNT {
                if self.matrix[(r, c)].abs() > threshold {
                    let (a, b) = (find(&mut parent, r), find(&mut parent, nrows + c));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let mut blocks: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new();
        for c in 0..PARAMETER_COUNT {
            let root = find(&mut parent, nrows + c);
            match blocks.iter_mut().find(|b| b.0 == root) {
                Some(b) => b.2.push(c),
                None => blocks.push((root, Vec::new(), vec![c])),
            }
        }
        for r in 0..nrows {
            let root = find(&mut parent, r);
            if let Some(b) = blocks.iter_mut().find(|b| b.0 == root) {
                b.1.push(r);
            }
        }
        blocks
            .into_iter()
            .map(|(_, rows, columns)| {
                let sub = DMatrix::from_fn(rows.len(), columns.len(), |i, j| self.matrix[(rows[i], columns[j])]);
                let kappa = if rows.len() < columns.len() {
                    f64::INFINITY
                } else {
                    ratio(&decompose_values(&sub))
                };
                DesignBlock { rows, columns, condition_number: kappa }
            })
            .collect()
    }

    /// Parameters grouped by the initial element they describe (αα, ββ and
    /// the αβ/βα pair), each with the rows that see it. Under perfect
    /// frequency selectivity these groups are the independent systems that
    /// are actually inverted; otherwise they share rows and their condition
    /// numbers are only indicative.
    pub fn initial_state_blocks(&self) -> Vec<DesignBlock> {
        let threshold = 1e-12 * self.matrix.amax();
        [Pair::AA, Pair::BB, Pair::AB]
            .iter()
            .map(|&group| {
                let columns: Vec<usize> = (0..PARAMETER_COUNT)
                    .filter(|&k| {
                        let col = PARAMETER_LAYOUT[k].1;
                        col == group || col == group.swapped()
                    })
                    .collect();
                let rows: Vec<usize> = (0..self.matrix.nrows())
                    .filter(|&r| columns.iter().any(|&c| self.matrix[(r, c)].abs() > threshold))
                    .collect();
                let sub = DMatrix::from_fn(rows.len(), columns.len(), |i, j| self.matrix[(rows[i], columns[j])]);
                let kappa = if rows.len() < columns.len() { f64::INFINITY } else { ratio(&decompose_values(&sub)) };
                DesignBlock { rows, columns, condition_number: kappa }
            })
            .collect()
    }

    /// Largest condition number among [`Self::initial_state_blocks`].
    pub fn initial_state_condition_number(&self) -> f64 {
        self.initial_state_blocks().iter().map(|b| b.condition_number).fold(0.0, f64::max)
    }

    /// Minimum-norm least-squares parameters for the stacked signals.
    pub fn solve_unconstrained(&self, stacked: &[f64]) -> DVector<f64> {
        let b = DVector::from_column_slice(stacked) - &self.offset;
        &self.pseudo_inverse * b
    }

    pub fn predict(&self, x: &[f64]) -> DVector<f64> {
        &self.matrix * DVector::from_column_slice(x) + &self.offset
    }

    /// Standard deviation of the linear functional ℓ·x̂ when every stacked
    /// signal component carries independent noise of width `sigma`.
    pub fn propagated_std(&self, functional: &[f64], sigma: f64) -> f64 {
        let l = DVector::from_column_slice(functional);
        (self.pseudo_inverse.transpose() * l).norm() * sigma
    }
}

fn sorted_svd(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>, DMatrix<f64>) {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("left singular vectors");
    let v_t = svd.v_t.expect("right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|a, b| svd.singular_values[*b].total_cmp(&svd.singular_values[*a]));
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u = DMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
    let v = DMatrix::from_fn(v_t.ncols(), order.len(), |r, c| v_t[(order[c], r)]);
    (values, u, v)
}

fn decompose_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut values: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

fn decompose(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>, DMatrix<f64>) {
    let (mut values, u, mut v) = sorted_svd(m);
    while values.len() < PARAMETER_COUNT {
        values.push(0.0);
    }
    if v.ncols() < PARAMETER_COUNT {
        v = complete_basis(&v);
    }
    let max = values[0];
    let mut pinv = DMatrix::zeros(m.ncols(), m.nrows());
    for (k, &value) in values.iter().enumerate().take(u.ncols()) {
        if value > RANK_TOLERANCE * max {
            pinv += v.column(k) * u.column(k).transpose() / value;
        }
    }
    (values, v, pinv)
}

/// Extends orthonormal columns to a full orthonormal basis.
fn complete_basis(v: &DMatrix<f64>) -> DMatrix<f64> {
    let n = v.nrows();
    let mut cols: Vec<DVector<f64>> = v.column_iter().map(|c| c.into_owned()).collect();
    for e in 0..n {
        if cols.len() == n {
            break;
        }
        let mut w = DVector::from_fn(n, |i, _| if i == e { 1.0 } else { 0.0 });
        for c in &cols {
            let d = c.dot(&w);
            w -= c * d;
        }
        let norm = w.norm();
        if norm > 1e-8 {
            cols.push(w / norm);
        }
    }
    DMatrix::from_columns(&cols)
}

fn ratio(values: &[f64]) -> f64 {
    let max = values[0];
    let min = *values.last().unwrap();
    if max == 0.0 || min <= RANK_TOLERANCE * max {
        f64::INFINITY
    } else {
        max / min
    }
}

/// σ_max/σ_min of the full design; +∞ when rank deficient.
pub fn condition_number(design: &DesignMatrix) -> f64 {
    ratio(design.singular_values())
}

/// Builds the design matrix without checking its rank.
pub fn assemble_design_matrix_unchecked(
    basis: &ExcitonBasis,
    config: &ExperimentConfig,
    bath: &BathParams,
    normalization: f64,
) -> DesignMatrix {
    let model = ForwardModel::new(basis, config, bath.gamma_opt);
    let zero = [0.0; PARAMETER_COUNT];
    let base = model.signals(&ProcessMatrix::from_parameters(&zero, 0.0));
    let mut matrix = DMatrix::zeros(ROW_COUNT, PARAMETER_COUNT);
    for k in 0..PARAMETER_COUNT {
        let mut unit = zero;
        unit[k] = 1.0;
        let response = model.signals(&ProcessMatrix::from_parameters(&unit, 0.0));
        for w in 0..Word::COUNT {
            let d = (response[w] - base[w]) / normalization;
            matrix[(2 * w, k)] = d.re;
            matrix[(2 * w + 1, k)] = d.im;
        }
    }
    let offset = DVector::from_fn(ROW_COUNT, |r, _| {
        let v = base[r / 2] / normalization;
        if r % 2 == 0 {
            v.re
        } else {
            v.im
        }
    });
    DesignMatrix::from_parts(matrix, offset, normalization, basis.geometry_hint())
}

/// Builds the design matrix and rejects designs that leave some parameter
/// direction unidentifiable.
pub fn assemble_design_matrix(
    basis: &ExcitonBasis,
    config: &ExperimentConfig,
    bath: &BathParams,
    normalization: f64,
) -> Result<DesignMatrix> {
    if !(normalization > 0.0 && normalization.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "normalization",
            reason: format!("must be positive, got {normalization}"),
        });
    }
    let design = assemble_design_matrix_unchecked(basis, config, bath, normalization);
    design.check_rank()?;
    Ok(design)
}

impl DesignMatrix {
    pub fn check_rank(&self) -> Result<()> {
        let rank = self.rank();
        if rank < PARAMETER_COUNT {
            return Err(Error::RankDeficient {
                rank,
                expected: PARAMETER_COUNT,
                null_space: self.null_space(),
                hint: self.hint,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stop once successive iterates and the constraint gap fall below this.
    pub tol: f64,
    pub max_iterations: usize,
    /// Unconstrained solutions with blocks no more negative than this are
    /// accepted as they are.
    pub psd_tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-9, max_iterations: 10_000, psd_tolerance: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub chi_hat: ProcessMatrix,
    /// ‖design·x − s‖₂ at the returned estimate.
    pub residual: f64,
    pub unconstrained_residual: f64,
    /// Smallest eigenvalue over the E and G Choi blocks of `chi_hat`.
    pub min_eigenvalue: f64,
    pub unconstrained_min_eigenvalue: f64,
    pub condition_number: f64,
    pub iterations: usize,
    /// The positivity constraint was active.
    pub constrained: bool,
}

/// min(λ_min(E), λ_min(G)).
pub fn block_min_eigenvalue(chi: &ProcessMatrix) -> f64 {
    min_hermitian_eigenvalue(&chi.choi_single_block()).min(min_hermitian_eigenvalue(&chi.ground_block()))
}

fn constraint_vector(x: &[f64]) -> DVector<f64> {
    let chi = ProcessMatrix::from_parameters(x, 0.0);
    let mut v = svec(&chi.choi_single_block());
    v.extend(svec(&chi.ground_block()));
    DVector::from_vec(v)
}

fn project_cone(v: &DVector<f64>) -> DVector<f64> {
    let e = project_psd(&smat(&v.as_slice()[..16], 4));
    let g = project_psd(&smat(&v.as_slice()[16..], 2));
    let mut out = svec(&e);
    out.extend(svec(&g));
    DVector::from_vec(out)
}

/// Least-squares estimate of χ(T) subject to complete positivity.
pub fn reconstruct_chi(signals: &SignalSet, design: &DesignMatrix, options: &SolverOptions) -> Result<ReconstructionResult> {
    design.check_rank()?;
    if !signals.is_finite() {
        return Err(Error::InvalidParameter { name: "signals", reason: "non-finite signal value".into() });
    }
    let stacked = signals.stacked();
    let b = DVector::from_column_slice(&stacked) - &design.offset;
    let x_ls = &design.pseudo_inverse * &b;
    let residual_of = |x: &DVector<f64>| (&design.matrix * x - &b).norm();
    let unconstrained_residual = residual_of(&x_ls);
    let t = signals.waiting_time;
    let chi_ls = ProcessMatrix::from_parameters(x_ls.as_slice(), t);
    let unconstrained_min_eigenvalue = block_min_eigenvalue(&chi_ls);
    let condition_number = condition_number(design);

    if unconstrained_min_eigenvalue >= -options.psd_tolerance {
        return Ok(ReconstructionResult {
            chi_hat: chi_ls,
            residual: unconstrained_residual,
            unconstrained_residual,
            min_eigenvalue: unconstrained_min_eigenvalue,
            unconstrained_min_eigenvalue,
            condition_number,
            iterations: 0,
            constrained: false,
        });
    }

    let (x, iterations) = admm(design, &b, &x_ls, options)?;
    let chi_hat = ProcessMatrix::from_parameters(x.as_slice(), t);
    Ok(ReconstructionResult {
        residual: residual_of(&x),
        min_eigenvalue: block_min_eigenvalue(&chi_hat),
        chi_hat,
        unconstrained_residual,
        unconstrained_min_eigenvalue,
        condition_number,
        iterations,
        constrained: true,
    })
}

/// min ½‖Dx − b‖² subject to A·x + c ∈ PSD(4) × PSD(2).
fn admm(design: &DesignMatrix, b: &DVector<f64>, start: &DVector<f64>, options: &SolverOptions) -> Result<(DVector<f64>, usize)> {
    let zero = [0.0; PARAMETER_COUNT];
    let c = constraint_vector(&zero);
    let m = c.len();
    let mut a = DMatrix::zeros(m, PARAMETER_COUNT);
    for k in 0..PARAMETER_COUNT {
        let mut unit = zero;
        unit[k] = 1.0;
        a.set_column(k, &(constraint_vector(&unit) - &c));
    }
    let d = &design.matrix;
    let dtd = d.transpose() * d;
    let dtb = d.transpose() * b;
    let ata = a.transpose() * &a;

    let mut rho = 1.0;
    let factor = |rho: f64| Cholesky::new(&dtd + &ata * rho).expect("positive definite system");
    let mut chol = factor(rho);
    let mut x = start.clone();
    let mut z = project_cone(&(&a * &x + &c));
    let mut u = DVector::zeros(m);
    let mut gap = f64::INFINITY;

    for iteration in 1..=options.max_iterations {
        let rhs = &dtb + a.transpose() * (&z - &u - &c) * rho;
        let x_next = chol.solve(&rhs);
        let ax = &a * &x_next + &c;
        let z_next = project_cone(&(&ax + &u));
        u += &ax - &z_next;
        let primal = (&ax - &z_next).norm();
        let dual = rho * (a.transpose() * (&z_next - &z)).norm();
        let step = (&x_next - &x).norm();
        x = x_next;
        z = z_next;
        gap = primal.max(dual).max(step);
        if gap < options.tol {
            return Ok((x, iteration));
        }
        if iteration % 20 == 0 {
            if primal > 10.0 * dual {
                rho *= 2.0;
                u /= 2.0;
                chol = factor(rho);
            } else if dual > 10.0 * primal {
                rho /= 2.0;
                u *= 2.0;
                chol = factor(rho);
            }
        }
    }
    Err(Error::NotConverged { iterations: options.max_iterations, gap })
}

/// ‖E(χ̂) − E(χ)‖_F / ‖E(χ)‖_F over the single-exciton Choi block.
pub fn relative_error(chi_hat: &ProcessMatrix, chi_true: &ProcessMatrix) -> Result<f64> {
    let reference = chi_true.choi_single_block();
    let denominator = reference.norm();
    if denominator == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((chi_hat.choi_single_block() - reference).norm() / denominator)
}

/// Single-exciton population recovered in the ground state, Σ_q χ_gg,qq.
pub fn leakage_report(chi_hat: &ProcessMatrix) -> f64 {
    chi_hat.leakage()
}

/// Leakage as a linear functional of the parameters (up to its constant 2).
pub fn leakage_functional() -> [f64; PARAMETER_COUNT] {
    let mut l = [0.0; PARAMETER_COUNT];
    l[..4].copy_from_slice(&[-1.0; 4]);
    l
}
