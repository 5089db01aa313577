//! Integer q-series: the coefficients of `j - 744`, primary multiplicities of
//! a moonshine-type character, simple-root multiplicities and the graded
//! dimensions of `V / C_2(V)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::CharacterError;
use crate::lattice::LatticeVector;

/// `Σ_i coeffs[i] q^(offset + i)`, known exactly up to `q^(offset + len - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    pub offset: i64,
    pub coeffs: Vec<BigInt>,
}

impl IntSeries {
    pub fn new(offset: i64, coeffs: Vec<BigInt>) -> Self {
        Self { offset, coeffs }
    }

    /// Highest exponent carried.
    pub fn top(&self) -> i64 {
        self.offset + self.coeffs.len() as i64 - 1
    }

    /// Coefficient of `q^e`; zero below the offset.
    ///
    /// # Panics
    /// If `e` is beyond the carried precision.
    pub fn coefficient(&self, e: i64) -> BigInt {
        assert!(e <= self.top(), "q^{e} beyond precision q^{}", self.top());
        if e < self.offset {
            return BigInt::zero();
        }
        self.coeffs[(e - self.offset) as usize].clone()
    }

    fn truncated_mul(&self, other: &Self, len: usize) -> Self {
        let len = len.min(self.coeffs.len()).min(other.coeffs.len());
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        Self::new(self.offset + other.offset, out)
    }

    /// Inverse of a power series with constant term ±1.
    fn inverse(&self) -> Self {
        let a0 = &self.coeffs[0];
        assert!(self.offset == 0 && a0.abs().is_one(), "series not invertible over Z");
        let n = self.coeffs.len();
        let mut inv = vec![BigInt::zero(); n];
        inv[0] = a0.clone();
        for k in 1..n {
            let mut s = BigInt::zero();
            for j in 1..=k {
                s += &self.coeffs[j] * &inv[k - j];
            }
            inv[k] = -(s * a0);
        }
        Self::new(0, inv)
    }
}

fn sigma(n: u64, power: u32) -> BigInt {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| BigInt::from(d).pow(power))
        .sum()
}

fn eisenstein(len: usize, scale: i64, power: u32) -> IntSeries {
    let mut c = vec![BigInt::one()];
    c.extend((1..len as u64).map(|n| sigma(n, power) * scale));
    IntSeries::new(0, c)
}

/// `E_4 = 1 + 240 Σ σ_3(n) q^n` through `q^(len-1)`.
pub fn e4(len: usize) -> IntSeries {
    eisenstein(len, 240, 3)
}

/// `E_6 = 1 - 504 Σ σ_5(n) q^n` through `q^(len-1)`.
pub fn e6(len: usize) -> IntSeries {
    eisenstein(len, -504, 5)
}

/// `Π (1 - q^n)^24` through `q^(len-1)`, so that `Δ = q` times this.
pub fn delta_over_q(len: usize) -> IntSeries {
    let mut acc = IntSeries::new(0, {
        let mut v = vec![BigInt::zero(); len];
        v[0] = BigInt::one();
        v
    });
    for n in 1..len {
        // multiply by (1 - q^n) 24 times, in place
        for _ in 0..24 {
            for i in (n..len).rev() {
                let t = acc.coeffs[i - n].clone();
                acc.coeffs[i] -= t;
            }
        }
    }
    acc
}

/// Both modular constructions of `j - 744` through `q^n_max`.
pub fn j_constructions(n_max: usize) -> (IntSeries, IntSeries) {
    let len = n_max + 2;
    let inv_d = delta_over_q(len).inverse();
    let e4v = e4(len);
    let mut a = e4v.truncated_mul(&e4v, len).truncated_mul(&e4v, len).truncated_mul(&inv_d, len);
    let e6v = e6(len);
    let mut b = e6v.truncated_mul(&e6v, len).truncated_mul(&inv_d, len);
    a.offset = -1;
    b.offset = -1;
    a.coeffs[1] -= 744;
    b.coeffs[1] += 1728 - 744;
    (a, b)
}

/// `j - 744 = q^-1 + 196884 q + ...` through `q^n_max`, computed as
/// `E_4^3/Δ - 744` and checked against `E_6^2/Δ + 1728 - 744`.
pub fn j_minus_744(n_max: usize) -> Result<IntSeries, CharacterError> {
    if n_max < 1 {
        return Err(CharacterError::Precision(n_max));
    }
    let (a, b) = j_constructions(n_max);
    if let Some(i) = (0..a.coeffs.len()).find(|&i| a.coeffs[i] != b.coeffs[i]) {
        return Err(CharacterError::DualConstructionMismatch {
            exponent: a.offset + i as i64,
        });
    }
    Ok(a)
}

/// Number of partitions of `n` into parts of size at least `min_part`.
pub fn partition_count(n: usize, min_part: usize) -> BigInt {
    partition_table(n, min_part)[n].clone()
}

fn partition_table(n: usize, min_part: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::one();
    for part in min_part.max(1)..=n {
        for i in part..=n {
            let t = p[i - part].clone();
            p[i] += t;
        }
    }
    p
}

/// Level-`level` dimension of the highest-weight module generated by a weight
/// `k` primary: the vacuum module omits `L(-1)`.
pub fn module_level_dim(k: u32, level: usize) -> BigInt {
    partition_count(level, if k == 0 { 2 } else { 1 })
}

/// `dim V_n^p` for `n = 0..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryMultiplicities {
    pub dims: Vec<BigInt>,
}

impl PrimaryMultiplicities {
    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.dims.get(n)
    }
}

/// Peels off the descendants of lower primaries from graded dimensions
/// `dims[n] = dim V_n`. A negative remainder means the input is not the
/// character of a module with this primary structure.
pub fn primary_mult_from_dims(dims: &[BigInt]) -> Result<PrimaryMultiplicities, CharacterError> {
    let n_max = dims.len().saturating_sub(1);
    let vac = partition_table(n_max, 2);
    let full = partition_table(n_max, 1);
    let mut out: Vec<BigInt> = Vec::with_capacity(dims.len());
    for (n, d) in dims.iter().enumerate() {
        let mut rest = d.clone();
        for (k, pk) in out.iter().enumerate() {
            let count = if k == 0 { &vac[n - k] } else { &full[n - k] };
            rest -= pk * count;
        }
        if rest.is_negative() {
            return Err(CharacterError::InconsistentCharacter {
                weight: n,
                value: rest.to_string(),
            });
        }
        out.push(rest);
    }
    Ok(PrimaryMultiplicities { dims: out })
}

/// Graded dimensions `dim V_n = c(n-1)` for `n = 0..=n_max`.
pub fn graded_dims(n_max: usize) -> Result<Vec<BigInt>, CharacterError> {
    let j = j_minus_744(n_max.max(2))?;
    Ok((0..=n_max as i64).map(|n| j.coefficient(n - 1)).collect())
}

/// `dim V_n^p` for the moonshine character, `n = 0..=n_max`.
pub fn primary_mult(n_max: usize) -> Result<PrimaryMultiplicities, CharacterError> {
    if n_max < 2 {
        return Err(CharacterError::Precision(n_max));
    }
    primary_mult_from_dims(&graded_dims(n_max)?)
}

/// Multiplicity of each `V_k^p` in `V_n`, omitting zeros and `k = 1`.
pub fn primary_decomposition(n: i64) -> BTreeMap<u32, u64> {
    let mut out = BTreeMap::new();
    if n < 0 {
        return out;
    }
    let n = n as usize;
    let small = |b: &BigInt| u64::try_from(b).expect("partition count fits in u64");
    let vac = small(&partition_count(n, 2));
    if vac > 0 {
        out.insert(0, vac);
    }
    let full = partition_table(n, 1);
    for k in 2..=n {
        out.insert(k as u32, small(&full[n - k]));
    }
    out
}

/// Simple roots `(1, m)` with multiplicities: `(1,-1) ↦ 1` and
/// `(1,m) ↦ c(m)` for `1 <= m <= m_max`.
pub fn simple_root_table(m_max: usize) -> Result<Vec<(LatticeVector, BigInt)>, CharacterError> {
    let j = j_minus_744(m_max.max(1))?;
    let mut out = vec![(LatticeVector::new(1, -1), BigInt::one())];
    out.extend((1..=m_max as i64).map(|m| (LatticeVector::new(1, m), j.coefficient(m))));
    Ok(out)
}

/// Stated hypothesis behind [`c2_quotient_report`].
pub const C2_ASSUMPTION: &str =
    "L(-1) is injective on the positive-weight subspace, so dim (L(-1)V)_n = dim V_(n-1) for n >= 2";

/// `dim (V / C_2(V))_n` for `n = 0..=n_max`, given `C_2(V) = L(-1)V + V_{>=5}`.
pub fn c2_quotient_report(n_max: usize) -> Result<Vec<(usize, BigInt)>, CharacterError> {
    if n_max < 5 {
        return Err(CharacterError::Precision(n_max));
    }
    let j = j_minus_744(4)?;
    Ok((0..=n_max)
        .map(|n| {
            let d = match n {
                0 => BigInt::one(),
                1 => BigInt::zero(),
                2..=4 => j.coefficient(n as i64 - 1) - j.coefficient(n as i64 - 2),
                _ => BigInt::zero(),
            };
            (n, d)
        })
        .collect())
}
