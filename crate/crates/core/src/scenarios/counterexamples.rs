//! Closed-form residuals of the uniform-flow examples on the plane. The
//! pressures are linear in `x`, hence not periodic, so nothing here touches
//! the grid.

use serde::Serialize;

use super::poly::{
    advection, div_tensor, divergence, gradient, is_zero_vec, time_derivative, vec_add, vec_scale,
    vec_sub, Poly, PolyVec,
};
use crate::mhd::CouplingMatrix;

/// `𝔠 R v` for polynomial `R` and `v`.
fn coupling(c: &CouplingMatrix, r: &Poly, v: &PolyVec) -> PolyVec {
    let m = c.entries;
    let row = |i: usize| r.mul(&v[0].scale(m[i][0]).add(&v[1].scale(m[i][1])));
    [row(0), row(1)]
}

/// Leray projector evaluated as `w + ∇(-Δ)⁻¹ div w`, in that order. It is
/// only defined here when `div w = 0`, where it returns `w`; inverting the
/// Laplacian on a nonzero polynomial has no canonical answer.
pub fn leray_by_composition(w: &PolyVec) -> Option<PolyVec> {
    divergence(w).is_zero().then(|| w.clone())
}

/// A residual and its value at `t = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub name: &'static str,
    pub components: [String; 2],
    pub at_t1: [f64; 2],
    pub spatially_constant: bool,
}

impl Residual {
    fn new(name: &'static str, r: &PolyVec) -> Self {
        let at = [1.0, 0.0, 0.0];
        Self {
            name,
            components: [r[0].to_string(), r[1].to_string()],
            // + 0.0 turns -0.0 into 0.0
            at_t1: [r[0].eval(at) + 0.0, r[1].eval(at) + 0.0],
            spatially_constant: r[0].is_spatially_constant() && r[1].is_spatially_constant(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.at_t1 == [0.0, 0.0] && self.components.iter().all(|c| c == "0")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    /// The time profile `f(t)`.
    pub f: String,
    /// Uniform flow `u = (f, 0)`, `R = b = 0`, `π = -f′x₁`: momentum
    /// residual of the unprojected system.
    pub uniform_unprojected: Residual,
    /// `∂ₜu + P div(u⊗u)` for the uniform flow.
    pub uniform_projected: Residual,
    /// `P(∇π)` computed by composition, equal to `∇π`.
    pub uniform_projected_pressure: Residual,
    /// `P(∂ₜu + div(u⊗u)) + P(∇π)`.
    pub uniform_projected_with_pressure: Residual,
    /// `α = (f, 0) = -β`, `R = 0`: magnetic residual of `b = (α - β)/2`
    /// with `u = (α + β)/2 = 0`.
    pub elsasser_magnetic: Residual,
    /// Elsässer residuals with `π₁ = -f′x₁ = -π₂`.
    pub elsasser_alpha: Residual,
    pub elsasser_beta: Residual,
}

/// Residuals for the time profile `f`, a polynomial in `t` alone.
pub fn counterexamples_for(f: &Poly, c: &CouplingMatrix) -> CounterexampleReport {
    assert!(f.is_spatially_constant(), "f must depend on t only");
    let zero = Poly::zero();
    let zero_vec: PolyVec = [Poly::zero(), Poly::zero()];
    let fp = f.derivative(0);
    let x1 = Poly::var(1);
    let pi = fp.mul(&x1).scale(-1.0);

    // uniform flow
    let u: PolyVec = [f.clone(), Poly::zero()];
    let b = zero_vec.clone();
    let r = zero.clone();
    let nonlinear = vec_add(
        &vec_sub(&div_tensor(&u, &u), &div_tensor(&b, &b)),
        &coupling(c, &r, &u),
    );
    let unprojected = vec_add(&vec_add(&time_derivative(&u), &nonlinear), &gradient(&pi));
    let projected_nl =
        leray_by_composition(&nonlinear).expect("uniform flow: nonlinear term is divergence-free");
    let projected = vec_add(&time_derivative(&u), &projected_nl);
    let p_grad = leray_by_composition(&gradient(&pi)).expect("∇π is divergence-free");
    let p_lhs =
        leray_by_composition(&vec_add(&time_derivative(&u), &nonlinear)).expect("divergence-free");
    let with_pressure = vec_add(&p_lhs, &p_grad);

    // Elsässer example
    let alpha: PolyVec = [f.clone(), Poly::zero()];
    let beta = vec_scale(&alpha, -1.0);
    let u = vec_scale(&vec_add(&alpha, &beta), 0.5);
    let b = vec_scale(&vec_sub(&alpha, &beta), 0.5);
    let magnetic = vec_sub(
        &vec_add(&time_derivative(&b), &advection(&u, &b)),
        &advection(&b, &u),
    );
    let pi1 = pi.clone();
    let pi2 = pi.scale(-1.0);
    let force = vec_scale(&coupling(c, &r, &vec_add(&alpha, &beta)), 0.5);
    let res_alpha = vec_add(
        &vec_add(
            &vec_add(&time_derivative(&alpha), &div_tensor(&beta, &alpha)),
            &gradient(&pi1),
        ),
        &force,
    );
    let res_beta = vec_add(
        &vec_add(
            &vec_add(&time_derivative(&beta), &div_tensor(&alpha, &beta)),
            &gradient(&pi2),
        ),
        &force,
    );
    debug_assert!(is_zero_vec(&[divergence(&alpha), divergence(&beta)]));

    CounterexampleReport {
        f: f.to_string(),
        uniform_unprojected: Residual::new("uniform_unprojected", &unprojected),
        uniform_projected: Residual::new("uniform_projected", &projected),
        uniform_projected_pressure: Residual::new("uniform_projected_pressure", &p_grad),
        uniform_projected_with_pressure: Residual::new(
            "uniform_projected_with_pressure",
            &with_pressure,
        ),
        elsasser_magnetic: Residual::new("elsasser_magnetic", &magnetic),
        elsasser_alpha: Residual::new("elsasser_alpha", &res_alpha),
        elsasser_beta: Residual::new("elsasser_beta", &res_beta),
    }
}

/// The report for `f(t) = t` with the rotation coupling.
pub fn run_counterexamples() -> CounterexampleReport {
    counterexamples_for(&Poly::var(0), &CouplingMatrix::rotation())
}

impl CounterexampleReport {
    pub fn residuals(&self) -> [&Residual; 7] {
        [
            &self.uniform_unprojected,
            &self.uniform_projected,
            &self.uniform_projected_pressure,
            &self.uniform_projected_with_pressure,
            &self.elsasser_magnetic,
            &self.elsasser_alpha,
            &self.elsasser_beta,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_profile_residuals() {
        let rep = run_counterexamples();
        assert!(rep.uniform_unprojected.is_zero());
        assert_eq!(rep.uniform_projected.at_t1, [1.0, 0.0]);
        assert_eq!(
            rep.uniform_projected.components,
            ["1".to_string(), "0".to_string()]
        );
        assert_eq!(rep.uniform_projected_pressure.at_t1, [-1.0, 0.0]);
        assert!(rep.uniform_projected_with_pressure.is_zero());
        assert_eq!(rep.elsasser_magnetic.at_t1, [1.0, 0.0]);
        assert!(rep.elsasser_alpha.is_zero() && rep.elsasser_beta.is_zero());
        assert!(rep.residuals().iter().all(|r| r.spatially_constant));
    }

    #[test]
    fn constant_profile_is_steady_everywhere() {
        let rep = counterexamples_for(&Poly::constant(2.5), &CouplingMatrix::rotation());
        assert!(rep.residuals().iter().all(|r| r.is_zero()), "{rep:?}");
    }

    #[test]
    fn quadratic_profile_gives_derivative() {
        // f = t², f′(1) = 2
        let f = Poly::var(0).mul(&Poly::var(0));
        let rep = counterexamples_for(&f, &CouplingMatrix::new([[1.0, 2.0], [3.0, 4.0]]));
        assert_eq!(rep.uniform_projected.at_t1, [2.0, 0.0]);
        assert_eq!(rep.uniform_projected.components[0], "2*t");
        assert_eq!(rep.elsasser_magnetic.at_t1, [2.0, 0.0]);
        assert!(rep.elsasser_alpha.is_zero());
    }

    #[test]
    fn composition_projector_needs_zero_divergence() {
        let w: PolyVec = [Poly::var(1), Poly::zero()];
        assert!(leray_by_composition(&w).is_none());
    }
}
