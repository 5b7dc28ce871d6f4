use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{GaugeField, TestField};
use crate::error::{Error, Result};

/// Spectral parameter `λ = λ₁ + iλ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParam {
    pub l1: f64,
    pub l2: f64,
}

/// How the cone `|λ₂| ≤ δ·λ₁` treats `λ₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeConvention {
    /// `|λ₂| ≤ δ|λ₁|` (free estimates).
    AbsLambda1,
    /// `|λ₂| ≤ δλ₁`; `λ₁ < 0` is outside (estimates with potentials).
    SignedLambda1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeSide {
    Inside,
    Outside,
    /// `|λ₂| = δ|λ₁|` up to rounding: both branches apply.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaugeSign {
    Plus,
    Minus,
}

impl SpectralParam {
    pub fn new(l1: f64, l2: f64) -> Self {
        Self { l1, l2 }
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.l1, self.l2)
    }

    /// `sgn(λ₂)`, with `sgn(0) = 1`.
    pub fn sgn(&self) -> f64 {
        if self.l2 < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// Phase rate `θ = sgn(λ₂)√|λ₁|`.
    pub fn theta(&self) -> f64 {
        self.sgn() * self.l1.abs().sqrt()
    }

    pub fn classify(&self, delta: f64, convention: ConeConvention) -> ConeSide {
        let a = self.l2.abs();
        let b = match convention {
            ConeConvention::AbsLambda1 => delta * self.l1.abs(),
            ConeConvention::SignedLambda1 => delta * self.l1,
        };
        let scale = a.abs().max(b.abs());
        if scale > 0.0 && (a - b).abs() <= 1e-12 * scale {
            return ConeSide::Boundary;
        }
        if a <= b {
            ConeSide::Inside
        } else {
            ConeSide::Outside
        }
    }
}

impl std::fmt::Display for SpectralParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{:+}i", self.l1, self.l2)
    }
}

impl std::str::FromStr for SpectralParam {
    type Err = Error;

    /// Accepts `a`, `bi`, `i`, `-i`, `a+bi`, `a-bi`, `a+i` (no spaces required).
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Domain(format!("cannot parse spectral parameter '{s}'"));
        if s.is_empty() {
            return Err(bad());
        }
        if let Some(body) = s.strip_suffix('i') {
            // split at the last sign that is not at position 0 and not after an exponent
            let bytes = body.as_bytes();
            let mut split = None;
            for k in (1..bytes.len()).rev() {
                if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                    split = Some(k);
                    break;
                }
            }
            let (re, im) = match split {
                Some(k) => (&body[..k], &body[k..]),
                None => ("0", body),
            };
            let im = match im {
                "" | "+" => 1.0,
                "-" => -1.0,
                v => v.parse::<f64>().map_err(|_| bad())?,
            };
            let re = re.parse::<f64>().map_err(|_| bad())?;
            Ok(Self::new(re, im))
        } else {
            Ok(Self::new(s.parse::<f64>().map_err(|_| bad())?, 0.0))
        }
    }
}

/// `u^± = e^{±iθ|z|} u`, `θ = sgn(λ₂)√|λ₁|`.
pub fn gauge_transform(u: &TestField, s: &SpectralParam, sign: GaugeSign) -> TestField {
    let theta = match sign {
        GaugeSign::Plus => s.theta(),
        GaugeSign::Minus => -s.theta(),
    };
    let tag = if sign == GaugeSign::Plus { "+" } else { "-" };
    TestField {
        id: format!("{}^{tag}[{s}]", u.id),
        field: Arc::new(GaugeField {
            inner: u.field.clone(),
            theta,
        }),
        ..u.clone()
    }
}
