//! Lower bounds on the lifespan. The constants `C` and `c` are inputs with
//! no claimed values; these are formula evaluators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{BesovSpec, LPFilterBank};
use crate::mhd::{CouplingMatrix, MhdState};

/// Norms of the initial datum entering the lifespan bounds, plus the
/// constants `C` and `c`. Pair norms are sums of the component norms, and
/// `X ∩ L²` norms are sums of the two.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifespanBoundInputs {
    /// `‖R₀‖_{B^s_{∞,r}}` for the general bound.
    pub norm_r0_bs: f64,
    /// `‖(u₀, b₀)‖_{B^s_{∞,r} ∩ L²}` for the general bound.
    pub norm_uv0_bs_l2: f64,
    pub norm_r0_linf: f64,
    /// `‖R₀‖_{B²_{∞,1}}`.
    pub norm_r0_b2: f64,
    /// `‖(R₀, b₀)‖_{B¹_{∞,1}}`.
    pub norm_rb0_b1: f64,
    /// `‖(u₀, b₀)‖_{B¹_{∞,1} ∩ L²}`.
    pub norm_ub0_b1_l2: f64,
    /// `‖(u₀, b₀)‖_{B²_{∞,1} ∩ L²}`.
    pub norm_ub0_b2_l2: f64,
    pub big_c: f64,
    pub small_c: f64,
}

impl LifespanBoundInputs {
    /// Measures every norm on `s`, using `spec` for the general bound.
    pub fn from_state(
        s: &MhdState,
        bank: &LPFilterBank,
        spec: BesovSpec,
        big_c: f64,
        small_c: f64,
    ) -> Self {
        let vb = |v: &crate::grid::VectorField, spec: BesovSpec| {
            bank.besov_norm(&v.x, spec) + bank.besov_norm(&v.y, spec)
        };
        let l2 = s.u.l2_norm() + s.b.l2_norm();
        let b1 = BesovSpec::linf_one(1.0);
        let b2 = BesovSpec::linf_one(2.0);
        Self {
            norm_r0_bs: bank.besov_norm(&s.r, spec),
            norm_uv0_bs_l2: vb(&s.u, spec) + vb(&s.b, spec) + l2,
            norm_r0_linf: s.r.max_abs(),
            norm_r0_b2: bank.besov_norm(&s.r, b2),
            norm_rb0_b1: bank.besov_norm(&s.r, b1) + vb(&s.b, b1),
            norm_ub0_b1_l2: vb(&s.u, b1) + vb(&s.b, b1) + l2,
            norm_ub0_b2_l2: vb(&s.u, b2) + vb(&s.b, b2) + l2,
            big_c,
            small_c,
        }
    }
}

/// `(1/‖R₀‖_∞) argsinh(C‖R₀‖_∞ / D)` with `D = ‖R₀‖_{Bs} + ‖(u₀,b₀)‖_{Bs∩L²}`,
/// and its limit `C/D` as `‖R₀‖_∞ → 0`.
pub fn lifespan_bound_general(inp: &LifespanBoundInputs) -> Result<f64> {
    let d = inp.norm_r0_bs + inp.norm_uv0_bs_l2;
    if d <= 0.0 {
        return Err(Error::DegenerateNorms);
    }
    let r = inp.norm_r0_linf;
    let x = inp.big_c * r / d;
    if x < 1e-6 {
        // argsinh(x)/x = 1 - x²/6 + O(x⁴)
        return Ok(inp.big_c / d * (1.0 - x * x / 6.0));
    }
    Ok(x.asinh() / r)
}

/// `z ↦ log(1 + Cz)` composed `n` times.
pub fn iterated_log(z: f64, big_c: f64, n: u32) -> f64 {
    (0..n).fold(z, |acc, _| (big_c * acc).ln_1p())
}

/// `C/(‖R₀‖_{B²} + ‖(u₀,b₀)‖_{B²∩L²}) · [log(1+C·)]^{∘n}(‖(u₀,b₀)‖_{B¹∩L²} / ‖(R₀,b₀)‖_{B¹})`
/// for `n ∈ {3, 4, 5}`.
pub fn lifespan_bound_2d(inp: &LifespanBoundInputs, n: u32) -> Result<f64> {
    if !(3..=5).contains(&n) {
        return Err(Error::InvalidIterationCount(n));
    }
    if inp.norm_rb0_b1 <= 0.0 {
        return Err(Error::DegenerateEuler);
    }
    let d = inp.norm_r0_b2 + inp.norm_ub0_b2_l2;
    if d <= 0.0 {
        return Err(Error::DegenerateNorms);
    }
    let ratio = inp.norm_ub0_b1_l2 / inp.norm_rb0_b1;
    Ok(inp.big_c / d * iterated_log(ratio, inp.big_c, n))
}

/// Which iterated logarithm applies to a datum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `R₀ ≡ 0`.
    NoDensity,
    /// `R₀ ≠ 0` with a skew-symmetric `𝔠`.
    SkewCoupling,
    General,
}

impl Regime {
    pub fn classify(s: &MhdState, c: &CouplingMatrix) -> Self {
        if s.r.max_coeff() == 0.0 {
            Regime::NoDensity
        } else if c.is_skew_symmetric() {
            Regime::SkewCoupling
        } else {
            Regime::General
        }
    }

    pub fn iterations(&self) -> u32 {
        match self {
            Regime::NoDensity => 3,
            Regime::SkewCoupling => 4,
            Regime::General => 5,
        }
    }
}

/// The bound with the iteration count of the datum's regime.
pub fn lifespan_bound_for_regime(inp: &LifespanBoundInputs, regime: Regime) -> Result<f64> {
    lifespan_bound_2d(inp, regime.iterations())
}
