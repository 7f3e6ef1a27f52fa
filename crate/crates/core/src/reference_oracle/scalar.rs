use num_complex::Complex64;

use crate::contour::Contour;
use crate::error::{check_order, param, Error, Result};

/// Largest accepted change between `n` and `2n` nodes, relative to `max(1, |value|)`.
pub const NODE_AGREEMENT: f64 = 1e-11;
const MAX_DOUBLINGS: usize = 4;
const IMAG_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourValue {
    pub value: f64,
    /// `|I_{2n} − I_n|` at the accepted node count.
    pub node_change: f64,
    pub nodes: usize,
}

fn check_inputs(alpha: f64, lambda: f64, t: f64) -> Result<()> {
    check_order(alpha)?;
    if !(lambda <= 0.0) || !lambda.is_finite() {
        return Err(param(
            "lambda",
            format!("eigenvalue must be finite and ≤ 0, got {lambda}"),
        ));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(param("t", format!("time must be positive, got {t}")));
    }
    Ok(())
}

fn evaluate<F>(contour: &Contour, f: F) -> Result<ContourValue>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut n = contour.nodes;
    let (mut coarse, _) = contour.integrate_with(n, &f);
    for _ in 0..MAX_DOUBLINGS {
        let (fine, scale) = contour.integrate_with(2 * n, &f);
        let change = (fine - coarse).norm();
        let unit = fine.re.abs().max(1.0);
        if change <= NODE_AGREEMENT * unit {
            if fine.im.abs() > IMAG_TOLERANCE * fine.re.abs().max(scale) {
                return Err(Error::Accuracy {
                    achieved: fine.im.abs(),
                    tolerance: IMAG_TOLERANCE,
                });
            }
            return Ok(ContourValue {
                value: fine.re,
                node_change: change,
                nodes: 2 * n,
            });
        }
        coarse = fine;
        n *= 2;
    }
    let (fine, _) = contour.integrate_with(2 * n, &f);
    Err(Error::Accuracy {
        achieved: (fine - coarse).norm() / fine.re.abs().max(1.0),
        tolerance: NODE_AGREEMENT,
    })
}

/// `F(t) = (2πi)^{-1} ∫ e^{zt} z^{-1} (z^α − λ)^{-1} dz` on a given contour.
pub fn scalar_f_on(alpha: f64, lambda: f64, t: f64, contour: &Contour) -> Result<ContourValue> {
    check_inputs(alpha, lambda, t)?;
    evaluate(contour, |z| (z * t).exp() / (z * (z.powf(alpha) - lambda)))
}

/// `E(t) = (2πi)^{-1} ∫ e^{zt} (z^α − λ)^{-1} dz` on a given contour.
pub fn scalar_e_on(alpha: f64, lambda: f64, t: f64, contour: &Contour) -> Result<ContourValue> {
    check_inputs(alpha, lambda, t)?;
    evaluate(contour, |z| (z * t).exp() / (z.powf(alpha) - lambda))
}

/// `F(t; λ)` on the contour adapted to `t`.
pub fn scalar_f(alpha: f64, lambda: f64, t: f64) -> Result<f64> {
    Ok(scalar_f_on(alpha, lambda, t, &Contour::for_time(t)?)?.value)
}

/// `E(t; λ) = F'(t; λ)` on the contour adapted to `t`.
pub fn scalar_e(alpha: f64, lambda: f64, t: f64) -> Result<f64> {
    Ok(scalar_e_on(alpha, lambda, t, &Contour::for_time(t)?)?.value)
}

/// The contour rule of a fixed `t` with the `e^{zt}`, `z^α` factors cached,
/// for evaluating `F(t; λ)` and `E(t; λ)` at many `λ`.
#[derive(Debug, Clone)]
pub struct ResolventRule {
    alpha: f64,
    t: f64,
    contour: Contour,
    coarse: Vec<[Complex64; 3]>,
    fine: Vec<[Complex64; 3]>,
}

impl ResolventRule {
    pub fn new(alpha: f64, t: f64) -> Result<Self> {
        check_inputs(alpha, 0.0, t)?;
        let contour = Contour::for_time(t)?;
        let build = |n: usize| -> Vec<[Complex64; 3]> {
            contour
                .nodes_with(n)
                .into_iter()
                .map(|node| {
                    let w = (node.z * t).exp() * node.dz / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
                    [w, node.z.powf(alpha), node.z]
                })
                .collect()
        };
        let coarse = build(contour.nodes);
        let fine = build(2 * contour.nodes);
        Ok(Self {
            alpha,
            t,
            contour,
            coarse,
            fine,
        })
    }

    fn sum(rule: &[[Complex64; 3]], lambda: f64, inverse_z: bool) -> Complex64 {
        rule.iter()
            .map(|[w, za, z]| {
                let r = *w / (*za - lambda);
                if inverse_z {
                    r / *z
                } else {
                    r
                }
            })
            .sum()
    }

    fn eval(&self, lambda: f64, inverse_z: bool) -> Result<f64> {
        check_inputs(self.alpha, lambda, self.t)?;
        let a = Self::sum(&self.coarse, lambda, inverse_z);
        let b = Self::sum(&self.fine, lambda, inverse_z);
        if (a - b).norm() <= NODE_AGREEMENT * b.re.abs().max(1.0) && b.im.abs() <= IMAG_TOLERANCE * b.re.abs().max(1.0)
        {
            return Ok(b.re);
        }
        let (alpha, t) = (self.alpha, self.t);
        let v = if inverse_z {
            scalar_f_on(alpha, lambda, t, &self.contour)?
        } else {
            scalar_e_on(alpha, lambda, t, &self.contour)?
        };
        Ok(v.value)
    }

    pub fn f(&self, lambda: f64) -> Result<f64> {
        self.eval(lambda, true)
    }

    pub fn e(&self, lambda: f64) -> Result<f64> {
        self.eval(lambda, false)
    }
}

/// `E_α(x)` for `x ≤ 0` as `1 + x F(1; x)`.
pub fn mittag_leffler_contour(alpha: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(1.0 + x * scalar_f(alpha, x, 1.0)?)
}
