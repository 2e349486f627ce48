//! Lindblad models: a Hermitian Hamiltonian plus a list of jump operators.

mod builders;
mod state;

use std::fmt;

pub use builders::{classical_embedding, driven_qubit};
pub use state::DensityMatrix;

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;
use crate::numerics::matrix::{I, ONE};

/// Absolute Hermiticity tolerance, scaled by `max(1, max|H_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Relative residual below which the special-case condition is accepted.
pub const SPECIAL_CASE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NotSquare { what: String, rows: usize, cols: usize },
    DimensionMismatch { what: String, expected: usize, found: usize },
    NonHermitian { defect: f64 },
    NonFinite { what: String },
    Empty,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSquare { what, rows, cols } => {
                write!(f, "{what} is {rows}x{cols}, not square")
            }
            Violation::DimensionMismatch {
                what,
                expected,
                found,
            } => write!(f, "{what} has dimension {found}, expected {expected}"),
            Violation::NonHermitian { defect } => {
                write!(f, "Hamiltonian is not Hermitian (max |H - H^H| = {defect:.3e})")
            }
            Violation::NonFinite { what } => write!(f, "{what} has non-finite entries"),
            Violation::Empty => write!(f, "model has zero Hamiltonian and no jump operators"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(Error::InvalidModel(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "ok");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks a candidate Hamiltonian and jump list without constructing a model.
pub fn validate_model(hamiltonian: &ComplexMatrix, jumps: &[ComplexMatrix]) -> ValidationReport {
    let mut violations = Vec::new();
    let (r, c) = hamiltonian.shape();
    if r != c {
        violations.push(Violation::NotSquare {
            what: "Hamiltonian".into(),
            rows: r,
            cols: c,
        });
    }
    let d = r;
    let finite = |m: &ComplexMatrix| m.as_slice().iter().all(|z| z.re.is_finite() && z.im.is_finite());
    if !finite(hamiltonian) {
        violations.push(Violation::NonFinite {
            what: "Hamiltonian".into(),
        });
    } else if r == c {
        let defect = hamiltonian.hermiticity_defect();
        if defect > HERMITIAN_TOL * hamiltonian.max_abs().max(1.0) {
            violations.push(Violation::NonHermitian { defect });
        }
    }
    for (k, l) in jumps.iter().enumerate() {
        let what = format!("jump operator {k}");
        if !l.is_square() {
            violations.push(Violation::NotSquare {
                what,
                rows: l.rows(),
                cols: l.cols(),
            });
        } else if l.rows() != d {
            violations.push(Violation::DimensionMismatch {
                what,
                expected: d,
                found: l.rows(),
            });
        } else if !finite(l) {
            violations.push(Violation::NonFinite { what });
        }
    }
    if hamiltonian.is_zero() && jumps.is_empty() {
        violations.push(Violation::Empty);
    }
    ValidationReport { violations }
}

#[derive(Clone, Debug)]
pub struct LindbladModel {
    hamiltonian: ComplexMatrix,
    jumps: Vec<ComplexMatrix>,
    label: String,
}

impl LindbladModel {
    pub fn new(
        hamiltonian: ComplexMatrix,
        jumps: Vec<ComplexMatrix>,
        label: impl Into<String>,
    ) -> Result<Self> {
        validate_model(&hamiltonian, &jumps).into_result()?;
        Ok(Self {
            hamiltonian,
            jumps,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[ComplexMatrix] {
        &self.jumps
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn validate(&self) -> ValidationReport {
        validate_model(&self.hamiltonian, &self.jumps)
    }

    /// No jump operators.
    pub fn is_closed(&self) -> bool {
        self.jumps.is_empty()
    }

    /// Vanishing Hamiltonian.
    pub fn is_classical(&self) -> bool {
        self.hamiltonian.is_zero()
    }

    /// `Σ_m L_m† L_m`.
    pub fn jump_rate_operator(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim(), self.dim());
        for l in &self.jumps {
            acc += &(&l.adjoint() * l);
        }
        acc
    }

    /// `H_eff = H_S − (i/2) Σ_m L_m† L_m`.
    pub fn effective_hamiltonian(&self) -> ComplexMatrix {
        &self.hamiltonian - &self.jump_rate_operator().scale(I * 0.5)
    }
}

pub fn effective_hamiltonian(m: &LindbladModel) -> ComplexMatrix {
    m.effective_hamiltonian()
}

/// First-order Kraus operators `{I − i dt H_eff, √dt L_1, …}`.
pub fn kraus_family(m: &LindbladModel, dt: f64) -> Result<Vec<ComplexMatrix>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("Kraus time step must be positive, got {dt}")));
    }
    let mut out = Vec::with_capacity(m.jumps().len() + 1);
    out.push(&ComplexMatrix::identity(m.dim()) - &m.effective_hamiltonian().scale(I * dt));
    out.extend(m.jumps().iter().map(|l| l.scale(ONE * dt.sqrt())));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecialCaseInfo {
    pub holds: bool,
    pub rate: f64,
    pub residual: f64,
}

/// Tests whether `Σ_m (G_m† L_m + L_m† G_m) = 2 r H_S` with `G_m = [H_S, L_m]`,
/// taking `r` as the least-squares fit.
pub fn special_case_rate(m: &LindbladModel) -> Result<SpecialCaseInfo> {
    let h = m.hamiltonian();
    if m.is_classical() {
        return Err(Error::ClassicalLimit);
    }
    let d = m.dim();
    let mut s = ComplexMatrix::zeros(d, d);
    for l in m.jumps() {
        let g = h.commutator(l);
        s += &(&g.adjoint() * l);
        s += &(&l.adjoint() * &g);
    }
    let hn2 = h.frobenius_norm().powi(2);
    let overlap: f64 = h
        .as_slice()
        .iter()
        .zip(s.as_slice())
        .map(|(a, b)| (a.conj() * b).re)
        .sum();
    let rate = overlap / (2.0 * hn2);
    let residual = s.distance(&h.scale_real(2.0 * rate));
    let holds = residual <= SPECIAL_CASE_TOL * h.frobenius_norm();
    Ok(SpecialCaseInfo {
        holds,
        rate,
        residual,
    })
}
