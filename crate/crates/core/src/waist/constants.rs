//! Closed-form waist constants and the width recurrence of the skeletal
//! construction, over any field.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `1/(2βm + m² + m + 1)`.
    Improved,
    /// `1/(2(β+2)^m − 1)`.
    Basic,
}

fn pow<F: Field>(x: F, k: u32) -> F {
    (0..k).fold(F::one(), |acc, _| acc * x.clone())
}

pub fn waist_constant<F: Field>(m: u32, beta: u32, variant: Variant) -> Result<F> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let (m64, b) = (m as u64, beta as u64);
    let den = match variant {
        Variant::Improved => F::from_u64(2 * b * m64 + m64 * m64 + m64 + 1),
        Variant::Basic => F::from_u64(2) * pow(F::from_u64(b + 2), m) - F::one(),
    };
    Ok(F::one() / den)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaistConstants<F> {
    pub m: u32,
    pub beta: u32,
    pub improved: F,
    pub basic: F,
}

impl<F: Field> WaistConstants<F> {
    pub fn new(m: u32, beta: u32) -> Result<Self> {
        Ok(Self {
            m,
            beta,
            improved: waist_constant(m, beta, Variant::Improved)?,
            basic: waist_constant(m, beta, Variant::Basic)?,
        })
    }
}

/// `w_k = (β+2)·w_{k−1} + (β+1)·c + ε` for `k = 1..=m`.
pub fn recurrence_width<F: Field>(w0: F, c: F, beta: u32, m: u32, eps: F) -> Vec<F> {
    let b = F::from_u64(beta as u64);
    let (a, d) = (b.clone() + F::from_u64(2), b + F::one());
    let step = d * c + eps;
    let mut w = w0;
    (0..m)
        .map(|_| {
            w = a.clone() * w.clone() + step.clone();
            w.clone()
        })
        .collect()
}

/// `(2(β+2)^k − 1)·w0`, the recurrence at `ε = 0`, `c = w0`.
pub fn recurrence_closed_form<F: Field>(w0: F, beta: u32, k: u32) -> F {
    (F::from_u64(2) * pow(F::from_u64(beta as u64 + 2), k) - F::one()) * w0
}
