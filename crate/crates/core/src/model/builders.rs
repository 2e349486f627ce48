use super::{LindbladModel, ValidationReport, Violation};
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;
use crate::numerics::matrix::C64;

/// Two-level atom with detuning `Δ`, Rabi frequency `Ω` and decay rate `κ`.
///
/// Basis order is `(|g⟩, |e⟩)`: `H = Δ|e⟩⟨e| + (Ω/2)σ_x`, `L = √κ |g⟩⟨e|`.
pub fn driven_qubit(delta: f64, omega: f64, kappa: f64) -> Result<LindbladModel> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Domain(format!("decay rate must be positive, got {kappa}")));
    }
    if !delta.is_finite() || !omega.is_finite() {
        return Err(Error::Domain("detuning and Rabi frequency must be finite".into()));
    }
    let h = ComplexMatrix::from_real_rows(&[&[0.0, omega / 2.0], &[omega / 2.0, delta]])?;
    let l = ComplexMatrix::from_real_rows(&[&[0.0, kappa.sqrt()], &[0.0, 0.0]])?;
    LindbladModel::new(
        h,
        vec![l],
        format!("driven qubit (delta={delta}, omega={omega}, kappa={kappa})"),
    )
}

/// Embeds a classical Markov jump process with rates `w[ν][μ]` (from `μ` to `ν`)
/// as a Lindblad model with `H = 0` and `L_νμ = √W_νμ |ν⟩⟨μ|`.
pub fn classical_embedding(w: &[Vec<f64>]) -> Result<LindbladModel> {
    let d = w.len();
    if d == 0 || w.iter().any(|row| row.len() != d) {
        return Err(Error::Dimension("rate matrix must be square and non-empty".into()));
    }
    let mut jumps = Vec::new();
    for (nu, row) in w.iter().enumerate() {
        for (mu, &rate) in row.iter().enumerate() {
            if !rate.is_finite() || rate < 0.0 {
                return Err(Error::Domain(format!(
                    "rate W[{nu}][{mu}] = {rate} must be finite and nonnegative"
                )));
            }
            if nu == mu {
                if rate != 0.0 {
                    return Err(Error::Domain(format!(
                        "diagonal rate W[{nu}][{nu}] must be zero"
                    )));
                }
                continue;
            }
            if rate > 0.0 {
                let mut l = ComplexMatrix::zeros(d, d);
                l[(nu, mu)] = C64::new(rate.sqrt(), 0.0);
                jumps.push(l);
            }
        }
    }
    if jumps.is_empty() {
        return Err(Error::InvalidModel(ValidationReport {
            violations: vec![Violation::Empty],
        }));
    }
    LindbladModel::new(ComplexMatrix::zeros(d, d), jumps, format!("classical {d}-state"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn driven_qubit_layout() {
        let m = driven_qubit(1.0, 1.0, 0.5).unwrap();
        assert_eq!(m.dim(), 2);
        assert!(m.validate().passed());
        assert_eq!(m.hamiltonian()[(1, 1)].re, 1.0);
        assert_eq!(m.hamiltonian()[(0, 1)].re, 0.5);
        assert_eq!(m.jumps()[0][(0, 1)].re, 0.5f64.sqrt());
    }

    #[test]
    fn driven_qubit_needs_positive_decay() {
        assert!(matches!(driven_qubit(1.0, 1.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn embedding_counts_jumps() {
        let m = classical_embedding(&[vec![0.0, 2.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(m.jumps().len(), 2);
        assert!(m.is_classical());
        assert!(matches!(
            classical_embedding(&[vec![0.0, 0.0], vec![0.0, 0.0]]),
            Err(Error::InvalidModel(_))
        ));
        assert!(matches!(
            classical_embedding(&[vec![0.0, -1.0], vec![1.0, 0.0]]),
            Err(Error::Domain(_))
        ));
    }
}
