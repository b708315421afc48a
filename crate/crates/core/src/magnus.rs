//! Truncated noncommutative power series in generators `X_0 .. X_{n-1}`.
//!
//! Coefficients are stored densely, one block per monomial length: the block
//! for length `d` has `n^d` slots and a word `w_1 .. w_d` lives at the base-`n`
//! index `w_1 n^{d-1} + .. + w_d`. Letters are 0-based here; the Milnor layer
//! translates to 1-based component indices.

use std::fmt;

use thiserror::Error;

use crate::scalar::Coefficient;

/// Default ceiling on the number of stored monomials.
pub const DEFAULT_CAPACITY: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MagnusError {
    #[error("truncation degrees differ ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("generator counts differ ({0} vs {1})")]
    GeneratorMismatch(usize, usize),
    #[error("series is not a unit: constant term is not 1")]
    NotAUnit,
    #[error("{monomials} monomials needed for {gens} generators at degree {degree}, cap is {cap}")]
    CapacityExceeded {
        gens: usize,
        degree: usize,
        monomials: u128,
        cap: usize,
    },
    #[error("letter {letter} out of range for {gens} generators")]
    BadLetter { letter: usize, gens: usize },
}

/// Number of monomials of length `0..=degree` in `gens` letters, saturating.
pub fn monomial_count(gens: usize, degree: usize) -> u128 {
    let mut total: u128 = 0;
    let mut block: u128 = 1;
    for _ in 0..=degree {
        total = total.saturating_add(block);
        block = block.saturating_mul(gens as u128);
    }
    total
}

/// Fails with `CapacityExceeded` when the dense layout would exceed `cap`.
pub fn check_capacity(gens: usize, degree: usize, cap: usize) -> Result<(), MagnusError> {
    let monomials = monomial_count(gens, degree);
    if monomials > cap as u128 {
        return Err(MagnusError::CapacityExceeded {
            gens,
            degree,
            monomials,
            cap,
        });
    }
    Ok(())
}

fn block_starts(gens: usize, degree: usize) -> Vec<usize> {
    let mut starts = Vec::with_capacity(degree + 2);
    let mut acc = 0usize;
    let mut block = 1usize;
    for _ in 0..=degree {
        starts.push(acc);
        acc += block;
        block *= gens;
    }
    starts.push(acc);
    starts
}

#[derive(Clone, PartialEq)]
pub struct MagnusSeries<T> {
    gens: usize,
    degree: usize,
    coeffs: Vec<T>,
}

impl<T: Coefficient> MagnusSeries<T> {
    pub fn zero(gens: usize, degree: usize) -> Self {
        let len = block_starts(gens, degree)[degree + 1];
        MagnusSeries {
            gens,
            degree,
            coeffs: vec![T::zero(); len],
        }
    }

    pub fn one(gens: usize, degree: usize) -> Self {
        let mut s = Self::zero(gens, degree);
        s.coeffs[0] = T::one();
        s
    }

    /// `1 + X_letter`, the image of a meridian.
    pub fn generator(gens: usize, degree: usize, letter: usize) -> Result<Self, MagnusError> {
        let mut s = Self::one(gens, degree);
        if letter >= gens {
            return Err(MagnusError::BadLetter { letter, gens });
        }
        if degree >= 1 {
            s.coeffs[1 + letter] = T::one();
        }
        Ok(s)
    }

    /// Builds a series from `(word, coefficient)` pairs; words longer than the
    /// truncation degree are dropped.
    pub fn from_terms<I>(gens: usize, degree: usize, terms: I) -> Result<Self, MagnusError>
    where
        I: IntoIterator<Item = (Vec<usize>, T)>,
    {
        let mut s = Self::zero(gens, degree);
        for (word, c) in terms {
            if word.len() > degree {
                continue;
            }
            let idx = s.index_of(&word)?;
            s.coeffs[idx] = s.coeffs[idx].clone() + c;
        }
        Ok(s)
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn constant(&self) -> &T {
        &self.coeffs[0]
    }

    fn index_of(&self, word: &[usize]) -> Result<usize, MagnusError> {
        let mut idx = 0usize;
        for &letter in word {
            if letter >= self.gens {
                return Err(MagnusError::BadLetter {
                    letter,
                    gens: self.gens,
                });
            }
            idx = idx * self.gens + letter;
        }
        Ok(block_starts(self.gens, word.len())[word.len()] + idx)
    }

    /// Coefficient of the monomial `word`; zero for words past the truncation.
    pub fn coeff(&self, word: &[usize]) -> Result<T, MagnusError> {
        if word.len() > self.degree {
            return Ok(T::zero());
        }
        Ok(self.coeffs[self.index_of(word)?].clone())
    }

    /// Non-zero terms, ordered by length then lexicographically.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &T)> + '_ {
        let starts = block_starts(self.gens, self.degree);
        let gens = self.gens;
        (0..=self.degree).flat_map(move |d| {
            let lo = starts[d];
            let hi = starts[d + 1];
            self.coeffs[lo..hi]
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(i, c)| (decode(i, d, gens), c))
        })
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    fn check_shape(&self, other: &Self) -> Result<(), MagnusError> {
        if self.degree != other.degree {
            return Err(MagnusError::DegreeMismatch(self.degree, other.degree));
        }
        if self.gens != other.gens {
            return Err(MagnusError::GeneratorMismatch(self.gens, other.gens));
        }
        Ok(())
    }

    /// Truncated product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self, MagnusError> {
        self.check_shape(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, MagnusError> {
        self.check_shape(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(MagnusSeries {
            gens: self.gens,
            degree: self.degree,
            coeffs,
        })
    }

    pub(crate) fn mul_unchecked(&self, rhs: &Self) -> Self {
        let n = self.gens;
        let k = self.degree;
        let starts = block_starts(n, k);
        let mut out = vec![T::zero(); self.coeffs.len()];
        let mut widths = Vec::with_capacity(k + 1);
        let mut w = 1usize;
        for _ in 0..=k {
            widths.push(w);
            w *= n;
        }
        for da in 0..=k {
            let a_blk = &self.coeffs[starts[da]..starts[da + 1]];
            for (ia, ca) in a_blk.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for db in 0..=(k - da) {
                    let b_blk = &rhs.coeffs[starts[db]..starts[db + 1]];
                    let base = starts[da + db] + ia * widths[db];
                    for (ib, cb) in b_blk.iter().enumerate() {
                        if cb.is_zero() {
                            continue;
                        }
                        let slot = &mut out[base + ib];
                        *slot = slot.clone() + ca.clone() * cb.clone();
                    }
                }
            }
        }
        MagnusSeries {
            gens: n,
            degree: k,
            coeffs: out,
        }
    }

    /// Inverse of a series with constant term 1, via `1 - u + u^2 - ..` where
    /// `self = 1 + u`.
    pub fn inverse(&self) -> Result<Self, MagnusError> {
        if !self.coeffs[0].is_one() {
            return Err(MagnusError::NotAUnit);
        }
        let mut u = self.clone();
        u.coeffs[0] = T::zero();
        let one = Self::one(self.gens, self.degree);
        // Horner: inv <- 1 - u * inv, exact through one more degree per pass.
        let mut inv = one.clone();
        for _ in 0..self.degree {
            let t = u.mul_unchecked(&inv);
            inv = one.sub_unchecked(&t);
        }
        Ok(inv)
    }

    fn sub_unchecked(&self, rhs: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        MagnusSeries {
            gens: self.gens,
            degree: self.degree,
            coeffs,
        }
    }

    /// Integer power; negative exponents go through [`Self::inverse`].
    pub fn pow(&self, exp: i64) -> Result<Self, MagnusError> {
        let base = if exp < 0 {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one(self.gens, self.degree);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_unchecked(&sq);
            }
        }
        Ok(acc)
    }

    /// `p_inv * self * p`.
    pub fn conjugate(&self, p: &Self, p_inv: &Self) -> Result<Self, MagnusError> {
        self.check_shape(p)?;
        self.check_shape(p_inv)?;
        Ok(p_inv.mul_unchecked(self).mul_unchecked(p))
    }

    /// Drops every term longer than `degree` (no-op when already shorter).
    pub fn truncate(&self, degree: usize) -> Self {
        if degree >= self.degree {
            return self.clone();
        }
        let len = block_starts(self.gens, degree)[degree + 1];
        MagnusSeries {
            gens: self.gens,
            degree,
            coeffs: self.coeffs[..len].to_vec(),
        }
    }
}

fn decode(mut idx: usize, len: usize, gens: usize) -> Vec<usize> {
    let mut word = vec![0; len];
    for slot in word.iter_mut().rev() {
        *slot = idx % gens;
        idx /= gens;
    }
    word
}

/// Free-function form of [`MagnusSeries::mul`].
pub fn magnus_mul<T: Coefficient>(
    a: &MagnusSeries<T>,
    b: &MagnusSeries<T>,
) -> Result<MagnusSeries<T>, MagnusError> {
    a.mul(b)
}

pub fn magnus_inverse<T: Coefficient>(a: &MagnusSeries<T>) -> Result<MagnusSeries<T>, MagnusError> {
    a.inverse()
}

impl<T: Coefficient + fmt::Display> fmt::Display for MagnusSeries<T> {
    /// `1 + X1 - 2 X1X2`, with 1-based letters.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (word, c) in self.terms() {
            let mono: String = word.iter().map(|l| format!("X{}", l + 1)).collect();
            let text = if word.is_empty() {
                format!("{c}")
            } else if c.is_one() {
                mono
            } else if (-c.clone()).is_one() {
                format!("-{mono}")
            } else {
                format!("{c} {mono}")
            };
            if first {
                write!(f, "{text}")?;
                first = false;
            } else if let Some(rest) = text.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {text}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<T: Coefficient + fmt::Display> fmt::Debug for MagnusSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MagnusSeries[n={}, k={}]({})", self.gens, self.degree, self)
    }
}
