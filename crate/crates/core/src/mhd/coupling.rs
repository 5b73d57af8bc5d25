use serde::{Deserialize, Serialize};

/// Constant 2×2 matrix `𝔠` of the coupling force `R𝔠u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingMatrix {
    pub entries: [[f64; 2]; 2],
}

impl CouplingMatrix {
    pub fn new(entries: [[f64; 2]; 2]) -> Self {
        Self { entries }
    }

    /// Quarter-turn rotation `[[0, -1], [1, 0]]`, so `𝔠u = u⊥`.
    pub fn rotation() -> Self {
        Self::new([[0.0, -1.0], [1.0, 0.0]])
    }

    pub fn zero() -> Self {
        Self::new([[0.0; 2]; 2])
    }

    #[inline]
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let m = &self.entries;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Exact test of `𝔠ᵀ = -𝔠`.
    pub fn is_skew_symmetric(&self) -> bool {
        let m = &self.entries;
        m[0][0] == 0.0 && m[1][1] == 0.0 && m[0][1] == -m[1][0]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|&v| v == 0.0)
    }

    /// Largest singular value, the sharp constant in `|𝔠y·y| ≤ ‖𝔠‖ |y|²`.
    pub fn operator_norm(&self) -> f64 {
        let [[a, b], [c, d]] = self.entries;
        // eigenvalues of 𝔠ᵀ𝔠
        let p = a * a + c * c;
        let q = a * b + c * d;
        let r = b * b + d * d;
        let mid = 0.5 * (p + r);
        let rad = (0.25 * (p - r) * (p - r) + q * q).sqrt();
        (mid + rad).sqrt()
    }

    /// `max_{j,k} |𝔠_{jk}|`.
    pub fn max_entry(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skew_cases() {
        assert!(CouplingMatrix::rotation().is_skew_symmetric());
        assert!(CouplingMatrix::zero().is_skew_symmetric());
        assert!(CouplingMatrix::new([[0.0, 2.0], [-2.0, 0.0]]).is_skew_symmetric());
        assert!(!CouplingMatrix::new([[0.0, 1.0], [1.0, 0.0]]).is_skew_symmetric());
        assert!(!CouplingMatrix::new([[1e-300, 1.0], [-1.0, 0.0]]).is_skew_symmetric());
        assert_eq!(CouplingMatrix::rotation().apply([1.0, 2.0]), [-2.0, 1.0]);
    }

    #[test]
    fn operator_norm_cases() {
        assert!((CouplingMatrix::rotation().operator_norm() - 1.0).abs() < 1e-15);
        assert_eq!(CouplingMatrix::zero().operator_norm(), 0.0);
        let diag = CouplingMatrix::new([[3.0, 0.0], [0.0, -0.5]]);
        assert!((diag.operator_norm() - 3.0).abs() < 1e-14);
        // [[1, 1], [0, 1]] has singular values (√5 ± 1)/2
        let shear = CouplingMatrix::new([[1.0, 1.0], [0.0, 1.0]]);
        assert!((shear.operator_norm() - (5f64.sqrt() + 1.0) / 2.0).abs() < 1e-14);
        assert_eq!(shear.max_entry(), 1.0);
    }
}
