use std::fmt;

use thiserror::Error;

use crate::exact::{power, prime_power, ExactInt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{name} must be at least 1")]
    Zero { name: &'static str },
}

/// Ambient space `F_{q^m}^n` split into `ell` blocks of length `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeParams {
    q: u64,
    m: u32,
    eta: u32,
    ell: u32,
}

impl CodeParams {
    pub fn new(q: u64, m: u32, eta: u32, ell: u32) -> Result<Self, ParamError> {
        for (name, v) in [("m", m), ("eta", eta), ("ell", ell)] {
            if v == 0 {
                return Err(ParamError::Zero { name });
            }
        }
        prime_power(q).map_err(|_| ParamError::NotPrimePower(q))?;
        Ok(CodeParams { q, m, eta, ell })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn eta(&self) -> u32 {
        self.eta
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Code length `n = ell * eta`.
    pub fn n(&self) -> u32 {
        self.ell * self.eta
    }

    /// Largest possible block rank, `min(m, eta)`.
    pub fn mu(&self) -> u32 {
        self.m.min(self.eta)
    }

    /// Largest possible sum-rank weight, `mu * ell`.
    pub fn max_weight(&self) -> u32 {
        self.mu() * self.ell
    }

    /// `q^(m n)`, the size of the whole space.
    pub fn space_size(&self) -> ExactInt {
        power(self.q, self.m as u64 * self.n() as u64)
    }

    /// `q^m`, the size of the extension field.
    pub fn ext_order(&self) -> u64 {
        self.q.pow(self.m)
    }

    /// Same space regrouped into `ell'` blocks; `None` unless `ell'` divides `n`.
    pub fn reshaped(&self, new_ell: u32) -> Option<CodeParams> {
        let n = self.n();
        if new_ell == 0 || !n.is_multiple_of(new_ell) {
            return None;
        }
        Some(CodeParams {
            q: self.q,
            m: self.m,
            eta: n / new_ell,
            ell: new_ell,
        })
    }

    /// Rank-metric view: a single block of length `n`.
    pub fn rank_view(&self) -> CodeParams {
        self.reshaped(1).expect("1 divides n")
    }

    /// Hamming-metric view: `n` blocks of length 1.
    pub fn hamming_view(&self) -> CodeParams {
        self.reshaped(self.n()).expect("n divides n")
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "q={} m={} eta={} ell={}",
            self.q, self.m, self.eta, self.ell
        )
    }
}
