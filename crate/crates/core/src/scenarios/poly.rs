//! Polynomials in `(t, x₁, x₂)` with exact small-integer arithmetic in `f64`,
//! enough to evaluate residuals of closed-form flows on the plane.

use std::collections::BTreeMap;
use std::fmt;

/// Variable index: 0 is `t`, 1 is `x₁`, 2 is `x₂`.
pub type Var = usize;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    /// Exponents of `(t, x₁, x₂)` to coefficient; no zero coefficients stored.
    terms: BTreeMap<[u32; 3], f64>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn monomial(c: f64, exps: [u32; 3]) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v] = 1;
        Self::monomial(1.0, e)
    }

    fn add_term(&mut self, exps: [u32; 3], c: f64) {
        let entry = self.terms.entry(exps).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(*e, *c);
        }
        p
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut p = Self::zero();
        for (e, c) in &self.terms {
            p.add_term(*e, a * c);
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                p.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        p
    }

    pub fn derivative(&self, v: Var) -> Self {
        let mut p = Self::zero();
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut d = *e;
                d[v] -= 1;
                p.add_term(d, c * e[v] as f64);
            }
        }
        p
    }

    pub fn eval(&self, at: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * (0..3).map(|i| at[i].powi(e[i] as i32)).product::<f64>())
            .sum()
    }

    /// `true` when no `x₁` or `x₂` appears.
    pub fn is_spatially_constant(&self) -> bool {
        self.terms.keys().all(|e| e[1] == 0 && e[2] == 0)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let names = ["t", "x1", "x2"];
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let sign = if *c < 0.0 { "-" } else { "+" };
            if first {
                if *c < 0.0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let factors: Vec<String> = (0..3)
                .filter(|&i| e[i] > 0)
                .map(|i| {
                    if e[i] == 1 {
                        names[i].to_string()
                    } else {
                        format!("{}^{}", names[i], e[i])
                    }
                })
                .collect();
            let a = c.abs();
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else if a == 1.0 {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{a}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Planar vector of polynomials.
pub type PolyVec = [Poly; 2];

pub fn vec_add(a: &PolyVec, b: &PolyVec) -> PolyVec {
    [a[0].add(&b[0]), a[1].add(&b[1])]
}

pub fn vec_sub(a: &PolyVec, b: &PolyVec) -> PolyVec {
    [a[0].sub(&b[0]), a[1].sub(&b[1])]
}

pub fn vec_scale(a: &PolyVec, s: f64) -> PolyVec {
    [a[0].scale(s), a[1].scale(s)]
}

pub fn time_derivative(a: &PolyVec) -> PolyVec {
    [a[0].derivative(0), a[1].derivative(0)]
}

pub fn gradient(p: &Poly) -> PolyVec {
    [p.derivative(1), p.derivative(2)]
}

pub fn divergence(a: &PolyVec) -> Poly {
    a[0].derivative(1).add(&a[1].derivative(2))
}

/// `(a·∇)b`.
pub fn advection(a: &PolyVec, b: &PolyVec) -> PolyVec {
    let comp = |q: &Poly| a[0].mul(&q.derivative(1)).add(&a[1].mul(&q.derivative(2)));
    [comp(&b[0]), comp(&b[1])]
}

/// `div(a ⊗ b)` with `(div(a⊗b))ᵢ = Σⱼ ∂ⱼ(aⱼbᵢ)`.
pub fn div_tensor(a: &PolyVec, b: &PolyVec) -> PolyVec {
    let comp = |q: &Poly| a[0].mul(q).derivative(1).add(&a[1].mul(q).derivative(2));
    [comp(&b[0]), comp(&b[1])]
}

pub fn is_zero_vec(a: &PolyVec) -> bool {
    a[0].is_zero() && a[1].is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_calculus() {
        let t = Poly::var(0);
        let x = Poly::var(1);
        let p = t.mul(&t).mul(&x).scale(3.0).add(&Poly::constant(2.0));
        assert_eq!(p.derivative(0), t.mul(&x).scale(6.0));
        assert_eq!(p.derivative(2), Poly::zero());
        assert_eq!(p.eval([2.0, 0.5, 9.0]), 8.0);
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.to_string(), "3*t^2*x1 + 2");
        assert_eq!(x.scale(-1.0).to_string(), "-x1");
    }

    #[test]
    fn vector_operators() {
        // a = (x₂, -x₁) is divergence-free, so div(a⊗b) = (a·∇)b
        let a = [Poly::var(2), Poly::var(1).scale(-1.0)];
        let b = [
            Poly::var(1).mul(&Poly::var(1)),
            Poly::var(0).mul(&Poly::var(2)),
        ];
        assert!(divergence(&a).is_zero());
        assert_eq!(div_tensor(&a, &b), advection(&a, &b));
    }
}
