//! Random LDPC ensembles built with the socket model.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CodeError, SparseParityMatrix};

/// A code rate `num/den` in lowest terms, strictly between 0 and 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Rate {
    num: u64,
    den: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Rate {
    pub fn new(num: u64, den: u64) -> Result<Self, CodeError> {
        if num == 0 || den == 0 || num >= den {
            return Err(CodeError::Params(format!("rate {num}/{den} is not in (0,1)")));
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `x * R`, if integral.
    pub fn scale(self, x: usize) -> Option<usize> {
        let p = x as u64 * self.num;
        p.is_multiple_of(self.den).then(|| (p / self.den) as usize)
    }

    /// `x / R`, if integral.
    pub fn inverse_scale(self, x: usize) -> Option<usize> {
        let p = x as u64 * self.den;
        p.is_multiple_of(self.num).then(|| (p / self.num) as usize)
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rate {
    type Err = CodeError;

    /// Accepts `a/b` or a decimal such as `0.25`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CodeError::Params(format!("cannot parse rate `{s}`"));
        if let Some((a, b)) = s.split_once('/') {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().parse().map_err(|_| bad())?;
            return Rate::new(a, b);
        }
        let s = s.trim();
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 9 || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let num = format!("{int}{frac}").parse::<u64>().map_err(|_| bad())?;
        Rate::new(num, den)
    }
}

impl TryFrom<String> for Rate {
    type Error = CodeError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Rate> for String {
    fn from(r: Rate) -> Self {
        r.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub n: usize,
    pub rate: Rate,
    pub col_weight: usize,
    pub row_weight: usize,
    pub seed: u64,
}

impl EnsembleParams {
    /// Number of parity checks `r = n(1 - R)`.
    pub fn n_checks(&self) -> Result<usize, CodeError> {
        let k = self.rate.scale(self.n).ok_or_else(|| {
            CodeError::Params(format!("n·R is not integral for n={}, R={}", self.n, self.rate))
        })?;
        Ok(self.n - k)
    }

    pub fn validate(&self) -> Result<usize, CodeError> {
        let r = self.n_checks()?;
        if self.col_weight == 0 || self.row_weight == 0 {
            return Err(CodeError::Params("weights must be positive".into()));
        }
        if self.col_weight * self.n != self.row_weight * r {
            return Err(CodeError::Params(format!(
                "socket counts differ: v·n = {} but w·r = {}",
                self.col_weight * self.n,
                self.row_weight * r
            )));
        }
        Ok(r)
    }
}

/// Samples a matrix from the socket-model ensemble: `v` sockets per column
/// and `w` per row are matched by a seeded uniform permutation, and parallel
/// edges are merged. Column weights are at most `v` and row weights at most
/// `w`.
pub fn generate_ensemble_code(params: &EnsembleParams) -> Result<SparseParityMatrix, CodeError> {
    let r = params.validate()?;
    let mut sockets: Vec<usize> = (0..params.n)
        .flat_map(|j| std::iter::repeat_n(j, params.col_weight))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    sockets.shuffle(&mut rng);
    let rows = sockets
        .chunks(params.row_weight)
        .map(<[usize]>::to_vec)
        .collect::<Vec<_>>();
    debug_assert_eq!(rows.len(), r);
    SparseParityMatrix::from_rows(params.n, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_parsing() {
        assert_eq!("0.25".parse::<Rate>().unwrap(), Rate::new(1, 4).unwrap());
        assert_eq!("2/4".parse::<Rate>().unwrap(), Rate::new(1, 2).unwrap());
        assert!("1".parse::<Rate>().is_err());
        assert!("0".parse::<Rate>().is_err());
        assert!("-0.5".parse::<Rate>().is_err());
    }

    #[test]
    fn spar_sized_ensemble() {
        let p = EnsembleParams {
            n: 4096,
            rate: Rate::new(1, 4).unwrap(),
            col_weight: 6,
            row_weight: 8,
            seed: 1,
        };
        let h = generate_ensemble_code(&p).unwrap();
        assert_eq!(h.n_rows(), 3072);
        assert!(h.max_row_weight() <= 8 && h.max_col_weight() <= 6);
    }

    #[test]
    fn small_ensemble_respects_bounds() {
        let p = EnsembleParams {
            n: 8,
            rate: Rate::new(1, 2).unwrap(),
            col_weight: 2,
            row_weight: 4,
            seed: 7,
        };
        let h = generate_ensemble_code(&p).unwrap();
        assert_eq!((h.n_rows(), h.n_cols()), (4, 8));
        assert!(h.max_row_weight() <= 4 && h.max_col_weight() <= 2);
    }

    #[test]
    fn socket_identity_enforced() {
        let p = EnsembleParams {
            n: 16,
            rate: Rate::new(1, 4).unwrap(),
            col_weight: 3,
            row_weight: 5,
            seed: 0,
        };
        assert!(generate_ensemble_code(&p).is_err());
    }

    #[test]
    fn same_seed_same_matrix() {
        let p = EnsembleParams {
            n: 64,
            rate: Rate::new(1, 4).unwrap(),
            col_weight: 6,
            row_weight: 8,
            seed: 42,
        };
        assert_eq!(generate_ensemble_code(&p).unwrap(), generate_ensemble_code(&p).unwrap());
    }
}
