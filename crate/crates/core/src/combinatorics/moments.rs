use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::pairings::{enumerate_pairings, genus};
use crate::error::{Result, RmtError};

/// Largest moment order for which pairings are enumerated exhaustively.
pub const MAX_PAIRING_SIZE: usize = 24;

/// Exact polynomial `sum_g c_g N^{-2g}` with nonnegative integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MomentPolynomial {
    coeffs: Vec<BigUint>,
}

impl MomentPolynomial {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_u64(coeffs: &[u64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// Coefficient of `N^{-2g}` at index `g`.
    pub fn genus_coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> BigUint {
        self.coeffs.get(g).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    pub fn eval(&self, n: f64) -> f64 {
        let x = 1.0 / (n * n);
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::INFINITY))
    }

    pub fn eval_exact(&self, n: u64) -> BigRational {
        let x = BigRational::new(1.into(), (n as i64 * n as i64).into());
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + BigRational::from_integer(c.clone().into()))
    }
}

/// JSON form `{"genus_coeffs":[c0,c1,...]}`; coefficients beyond `u64` are
/// written as decimal strings.
impl Serialize for MomentPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let values: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|c| match c.to_u64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from(c.to_string()),
            })
            .collect();
        let mut st = s.serialize_struct("MomentPolynomial", 1)?;
        st.serialize_field("genus_coeffs", &values)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for MomentPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            genus_coeffs: Vec<serde_json::Value>,
        }
        let raw = Raw::deserialize(d)?;
        let mut coeffs = Vec::with_capacity(raw.genus_coeffs.len());
        for v in raw.genus_coeffs {
            let c = match &v {
                serde_json::Value::Number(n) => n.as_u64().map(BigUint::from),
                serde_json::Value::String(s) => s.parse().ok(),
                _ => None,
            };
            coeffs.push(c.ok_or_else(|| serde::de::Error::custom(format!("bad coefficient {v}")))?);
        }
        Ok(Self::new(coeffs))
    }
}

/// `E[tr A^m]` for normalized GUE as a polynomial in `N^{-2}`, by summing
/// `N^{-2 genus}` over all pairings of `[m]`.
pub fn gue_moment_exact(m: usize) -> Result<MomentPolynomial> {
    if m % 2 == 1 {
        return Err(RmtError::Parameter(format!("odd moment order {m}; odd GUE moments vanish")));
    }
    if m > MAX_PAIRING_SIZE {
        return Err(RmtError::Resource(format!(
            "moment order {m} exceeds the pairing enumeration budget {MAX_PAIRING_SIZE}"
        )));
    }
    let mut counts = vec![0u64; m / 4 + 1];
    for p in enumerate_pairings(m) {
        counts[genus(&p).genus] += 1;
    }
    Ok(MomentPolynomial::from_u64(&counts))
}
