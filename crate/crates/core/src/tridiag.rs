//! Complex tridiagonal systems (Thomas algorithm).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// LU factors of a tridiagonal matrix, reusable across right-hand sides.
///
/// Row i reads `sub[i-1]·x[i-1] + diag[i]·x[i] + sup[i]·x[i+1]`. No pivoting:
/// the factorization fails on a zero pivot instead.
#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    sub: Vec<Complex64>,
    /// 1 / (modified diagonal)
    inv_pivot: Vec<Complex64>,
    /// modified super-diagonal
    sup_mod: Vec<Complex64>,
}

impl TridiagonalLu {
    pub fn factor(sub: &[Complex64], diag: &[Complex64], sup: &[Complex64]) -> Result<TridiagonalLu> {
        let n = diag.len();
        if n == 0 || sub.len() + 1 != n || sup.len() + 1 != n {
            return Err(Error::Validation(format!(
                "tridiagonal bands have inconsistent lengths: sub {}, diag {n}, sup {}",
                sub.len(),
                sup.len()
            )));
        }
        let mut inv_pivot = Vec::with_capacity(n);
        let mut sup_mod = Vec::with_capacity(n.saturating_sub(1));
        let mut pivot = diag[0];
        for i in 0..n {
            if i > 0 {
                pivot = diag[i] - sub[i - 1] * sup_mod[i - 1];
            }
            if pivot.norm() == 0.0 || !pivot.is_finite() {
                return Err(Error::Propagation(format!(
                    "tridiagonal factorization broke down at row {i} (pivot {pivot})"
                )));
            }
            let inv = pivot.inv();
            inv_pivot.push(inv);
            if i + 1 < n {
                sup_mod.push(sup[i] * inv);
            }
        }
        Ok(TridiagonalLu {
            sub: sub.to_vec(),
            inv_pivot,
            sup_mod,
        })
    }

    pub fn len(&self) -> usize {
        self.inv_pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_pivot.is_empty()
    }

    /// Overwrites `rhs` with the solution.
    pub fn solve_in_place(&self, rhs: &mut [Complex64]) {
        let n = self.len();
        assert_eq!(rhs.len(), n, "right-hand side has wrong length");
        rhs[0] *= self.inv_pivot[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.sub[i - 1] * rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            let next = rhs[i + 1];
            rhs[i] -= self.sup_mod[i] * next;
        }
    }
}

/// One-shot solve of a tridiagonal system.
pub fn solve_tridiagonal(
    sub: &[Complex64],
    diag: &[Complex64],
    sup: &[Complex64],
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let lu = TridiagonalLu::factor(sub, diag, sup)?;
    let mut x = rhs.to_vec();
    lu.solve_in_place(&mut x);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Propagation("non-finite tridiagonal solution".into()));
    }
    Ok(x)
}
