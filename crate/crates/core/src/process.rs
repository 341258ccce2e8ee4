//! The process matrix χ(T) on the tomographically accessible sector.
//!
//! χ_ab,cd maps the initial element |c⟩⟨d| to the final element |a⟩⟨b|.
//! Rows are tracked for {gg, αα, ββ, αβ, βα}; columns for
//! {αα, ββ, αβ, βα}. The gg column is fixed (the ground state does not
//! evolve) and rows involving ground-exciton coherences are untracked and read
//! as zero.

use alloc::vec::Vec;
use nalgebra::DMatrix;

use crate::linalg::min_hermitian_eigenvalue;
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Number of free real parameters once Hermiticity, trace preservation and
/// ground-state fixity are imposed.
pub const PARAMETER_COUNT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Ground,
    Alpha,
    Beta,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Ground, Level::Alpha, Level::Beta];

    pub fn symbol(self) -> char {
        match self {
            Level::Ground => 'g',
            Level::Alpha => 'a',
            Level::Beta => 'b',
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl From<crate::Exciton> for Level {
    fn from(x: crate::Exciton) -> Self {
        match x {
            crate::Exciton::Alpha => Level::Alpha,
            crate::Exciton::Beta => Level::Beta,
        }
    }
}

/// Density-matrix element |ket⟩⟨bra|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    pub ket: Level,
    pub bra: Level,
}

impl Pair {
    pub const GG: Pair = Pair::new(Level::Ground, Level::Ground);
    pub const AA: Pair = Pair::new(Level::Alpha, Level::Alpha);
    pub const BB: Pair = Pair::new(Level::Beta, Level::Beta);
    pub const AB: Pair = Pair::new(Level::Alpha, Level::Beta);
    pub const BA: Pair = Pair::new(Level::Beta, Level::Alpha);

    /// Tracked rows, in storage order.
    pub const SECTOR: [Pair; 5] = [Pair::GG, Pair::AA, Pair::BB, Pair::AB, Pair::BA];
    /// Tracked (non-trivial) columns, in storage order.
    pub const COLUMNS: [Pair; 4] = [Pair::AA, Pair::BB, Pair::AB, Pair::BA];

    pub const fn new(ket: Level, bra: Level) -> Pair {
        Pair { ket, bra }
    }

    pub fn swapped(self) -> Pair {
        Pair::new(self.bra, self.ket)
    }

    pub fn is_population(self) -> bool {
        self.ket == self.bra
    }

    /// Two-letter label such as "ab".
    pub fn label(self) -> &'static str {
        use Level::*;
        match (self.ket, self.bra) {
            (Ground, Ground) => "gg",
            (Ground, Alpha) => "ga",
            (Ground, Beta) => "gb",
            (Alpha, Ground) => "ag",
            (Alpha, Alpha) => "aa",
            (Alpha, Beta) => "ab",
            (Beta, Ground) => "bg",
            (Beta, Alpha) => "ba",
            (Beta, Beta) => "bb",
        }
    }

    pub fn from_label(label: &str) -> Option<Pair> {
        let mut chars = label.chars();
        let level = |c: char| match c {
            'g' => Some(Level::Ground),
            'a' => Some(Level::Alpha),
            'b' => Some(Level::Beta),
            _ => None,
        };
        let ket = level(chars.next()?)?;
        let bra = level(chars.next()?)?;
        if chars.next().is_some() {
            return None;
        }
        Some(Pair::new(ket, bra))
    }

    pub fn row_index(self) -> Option<usize> {
        Pair::SECTOR.iter().position(|p| *p == self)
    }

    pub fn column_index(self) -> Option<usize> {
        Pair::COLUMNS.iter().position(|p| *p == self)
    }
}

/// (row, column, is-imaginary-part) of each free real parameter. Entries
/// whose Hermitian partner is also tracked are stored once.
pub const PARAMETER_LAYOUT: [(Pair, Pair, bool); PARAMETER_COUNT] = [
    (Pair::AA, Pair::AA, false),
    (Pair::AA, Pair::BB, false),
    (Pair::BB, Pair::AA, false),
    (Pair::BB, Pair::BB, false),
    (Pair::AA, Pair::AB, false),
    (Pair::AA, Pair::AB, true),
    (Pair::BB, Pair::AB, false),
    (Pair::BB, Pair::AB, true),
    (Pair::AB, Pair::AA, false),
    (Pair::AB, Pair::AA, true),
    (Pair::AB, Pair::BB, false),
    (Pair::AB, Pair::BB, true),
    (Pair::AB, Pair::AB, false),
    (Pair::AB, Pair::AB, true),
    (Pair::AB, Pair::BA, false),
    (Pair::AB, Pair::BA, true),
];

/// Human-readable label of parameter `k`, e.g. "Im chi[ab,aa]".
pub fn parameter_label(k: usize) -> alloc::string::String {
    let (row, col, imag) = PARAMETER_LAYOUT[k];
    alloc::format!("{} chi[{},{}]", if imag { "Im" } else { "Re" }, row.label(), col.label())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessMatrix {
    /// entries[row][col] over `Pair::SECTOR` × `Pair::COLUMNS`.
    entries: [[C64; 4]; 5],
    waiting_time: f64,
}

impl ProcessMatrix {
    /// Builds χ from raw sector entries without enforcing any constraint.
    pub fn from_entries(entries: [[C64; 4]; 5], waiting_time: f64) -> Self {
        ProcessMatrix { entries, waiting_time }
    }

    pub fn identity(waiting_time: f64) -> Self {
        let mut entries = [[ZERO; 4]; 5];
        for (c, col) in Pair::COLUMNS.iter().enumerate() {
            entries[col.row_index().unwrap()][c] = ONE;
        }
        ProcessMatrix { entries, waiting_time }
    }

    pub fn zero(waiting_time: f64) -> Self {
        ProcessMatrix { entries: [[ZERO; 4]; 5], waiting_time }
    }

    /// Assembles χ from the free parameters, filling Hermitian partners and
    /// the gg row (trace preservation).
    pub fn from_parameters(x: &[f64], waiting_time: f64) -> Self {
        assert_eq!(x.len(), PARAMETER_COUNT, "expected {PARAMETER_COUNT} parameters");
        let mut chi = ProcessMatrix::zero(waiting_time);
        for (k, &(row, col, imag)) in PARAMETER_LAYOUT.iter().enumerate() {
            let z = if imag { C64::new(0.0, x[k]) } else { C64::new(x[k], 0.0) };
            chi.add(row, col, z);
            let (prow, pcol) = (row.swapped(), col.swapped());
            if (prow, pcol) != (row, col) {
                chi.add(prow, pcol, z.conj());
            }
        }
        for (c, col) in Pair::COLUMNS.iter().enumerate() {
            let delta = if col.is_population() { ONE } else { ZERO };
            chi.entries[0][c] = delta - chi.entries[1][c] - chi.entries[2][c];
        }
        chi
    }

    pub fn parameters(&self) -> [f64; PARAMETER_COUNT] {
        let mut x = [0.0; PARAMETER_COUNT];
        for (k, &(row, col, imag)) in PARAMETER_LAYOUT.iter().enumerate() {
            let z = self.get(row, col);
            x[k] = if imag { z.im } else { z.re };
        }
        x
    }

    pub fn waiting_time(&self) -> f64 {
        self.waiting_time
    }

    pub fn entries(&self) -> &[[C64; 4]; 5] {
        &self.entries
    }

    /// χ_row,col for any pair of elements.
    pub fn get(&self, row: Pair, col: Pair) -> C64 {
        if col == Pair::GG {
            return if row == Pair::GG { ONE } else { ZERO };
        }
        match (row.row_index(), col.column_index()) {
            (Some(r), Some(c)) => self.entries[r][c],
            _ => ZERO,
        }
    }

    /// Overwrites a tracked entry. Panics for untracked rows or columns.
    pub fn set(&mut self, row: Pair, col: Pair, value: C64) {
        let r = row.row_index().expect("untracked row");
        let c = col.column_index().expect("untracked column");
        self.entries[r][c] = value;
    }

    fn add(&mut self, row: Pair, col: Pair, value: C64) {
        let r = row.row_index().expect("untracked row");
        let c = col.column_index().expect("untracked column");
        self.entries[r][c] += value;
    }

    /// The map as a 5×5 matrix acting on (gg, αα, ββ, αβ, βα) vectors.
    pub fn sector_matrix(&self) -> DMatrix<C64> {
        DMatrix::from_fn(5, 5, |r, c| self.get(Pair::SECTOR[r], Pair::SECTOR[c]))
    }

    /// `self ∘ earlier`: apply `earlier` first. Waiting times add.
    pub fn compose(&self, earlier: &ProcessMatrix) -> ProcessMatrix {
        let product = self.sector_matrix() * earlier.sector_matrix();
        let mut entries = [[ZERO; 4]; 5];
        for (r, row) in entries.iter_mut().enumerate() {
            for (c, value) in row.iter_mut().enumerate() {
                *value = product[(r, c + 1)];
            }
        }
        ProcessMatrix { entries, waiting_time: self.waiting_time + earlier.waiting_time }
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> ProcessMatrix {
        let mut out = self.clone();
        for row in out.entries.iter_mut() {
            for v in row.iter_mut() {
                *v = f(*v);
            }
        }
        out
    }

    /// max |χ_ab,cd − χ*_ba,dc| over tracked entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for row in Pair::SECTOR {
            for col in Pair::SECTOR {
                let d = self.get(row, col) - self.get(row.swapped(), col.swapped()).conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// max over columns cd of |Σ_a χ_aa,cd − δ_cd|.
    pub fn trace_defect(&self) -> f64 {
        Pair::SECTOR
            .iter()
            .map(|&col| {
                let total = self.get(Pair::GG, col) + self.get(Pair::AA, col) + self.get(Pair::BB, col);
                let delta = if col.is_population() { ONE } else { ZERO };
                (total - delta).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Full 9×9 Choi matrix M[(a,c),(b,d)] = χ_ab,cd with (a,c) in row-major
    /// order over {g, α, β}².
    pub fn choi_matrix(&self) -> DMatrix<C64> {
        let idx = |a: Level, c: Level| 3 * a.index() + c.index();
        let mut m = DMatrix::zeros(9, 9);
        for a in Level::ALL {
            for b in Level::ALL {
                for c in Level::ALL {
                    for d in Level::ALL {
                        m[(idx(a, c), idx(b, d))] = self.get(Pair::new(a, b), Pair::new(c, d));
                    }
                }
            }
        }
        m
    }

    /// Single-exciton block of the Choi matrix over (αα, αβ, βα, ββ) index
    /// pairs (a, c).
    pub fn choi_single_block(&self) -> DMatrix<C64> {
        let levels = [(Level::Alpha, Level::Alpha), (Level::Alpha, Level::Beta), (Level::Beta, Level::Alpha), (Level::Beta, Level::Beta)];
        DMatrix::from_fn(4, 4, |i, j| {
            let (a, c) = levels[i];
            let (b, d) = levels[j];
            self.get(Pair::new(a, b), Pair::new(c, d))
        })
    }

    /// Ground-gain block χ_gg,cd over c, d ∈ {α, β}.
    pub fn ground_block(&self) -> DMatrix<C64> {
        let ex = [Level::Alpha, Level::Beta];
        DMatrix::from_fn(2, 2, |i, j| self.get(Pair::GG, Pair::new(ex[i], ex[j])))
    }

    /// Smallest eigenvalue of the Hermitian part of the Choi matrix.
    pub fn min_choi_eigenvalue(&self) -> f64 {
        min_hermitian_eigenvalue(&self.choi_matrix())
    }

    /// Single-exciton population recovered in the ground state: Σ_q χ_gg,qq.
    pub fn leakage(&self) -> f64 {
        (self.get(Pair::GG, Pair::AA) + self.get(Pair::GG, Pair::BB)).re
    }

    /// All tracked (row, col, value) triples including the fixed gg column.
    pub fn tracked_entries(&self) -> Vec<(Pair, Pair, C64)> {
        let mut out = Vec::with_capacity(25);
        for row in Pair::SECTOR {
            for col in Pair::SECTOR {
                out.push((row, col, self.get(row, col)));
            }
        }
        out
    }

    pub fn max_abs_difference(&self, other: &ProcessMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..5 {
            for c in 0..4 {
                worst = worst.max((self.entries[r][c] - other.entries[r][c]).norm());
            }
        }
        worst
    }

    /// Checks Hermiticity, trace preservation and positivity to `tol`.
    pub fn check_cptp(&self, tol: f64) -> Result<()> {
        let herm = self.hermiticity_defect();
        let trace = self.trace_defect();
        let eig = self.min_choi_eigenvalue();
        if herm > tol || trace > tol || eig < -tol {
            return Err(Error::InvalidParameter {
                name: "chi",
                reason: alloc::format!(
                    "not CPTP: hermiticity defect {herm:e}, trace defect {trace:e}, \
                     min Choi eigenvalue {eig:e}"
                ),
            });
        }
        Ok(())
    }
}
