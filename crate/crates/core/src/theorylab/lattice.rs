use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, WlError};

/// Desired frequencies `phi_i = a_i / b` in lowest common terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFrequencies {
    numerators: Vec<u64>,
    denominator: u64,
}

impl RationalFrequencies {
    /// From `phi_i = num_i / den_i`; rejects non-positive entries and sums other than 1.
    pub fn from_fractions(fractions: &[(u64, u64)]) -> Result<Self> {
        if fractions.len() < 2 {
            return Err(WlError::Config("need at least two frequencies".into()));
        }
        let mut total = BigRational::zero();
        let mut phis = Vec::with_capacity(fractions.len());
        for &(n, d) in fractions {
            if n == 0 || d == 0 {
                return Err(WlError::Config(format!("invalid frequency {n}/{d}")));
            }
            let phi = BigRational::new(BigInt::from(n), BigInt::from(d));
            total += &phi;
            phis.push(phi);
        }
        if !total.is_one() {
            return Err(WlError::Config(format!("frequencies sum to {total}, not 1")));
        }
        let b = phis.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
        let nums: Vec<BigInt> = phis.iter().map(|p| (p * BigRational::from_integer(b.clone())).to_integer()).collect();
        let g = nums.iter().fold(b.clone(), |acc, n| acc.gcd(n));
        let to_u64 = |v: BigInt| v.to_u64().ok_or_else(|| WlError::Config("frequency denominator too large".into()));
        Ok(Self {
            numerators: nums.into_iter().map(|n| to_u64(n / &g)).collect::<Result<_>>()?,
            denominator: to_u64(b / g)?,
        })
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn phi(&self, i: usize) -> BigRational {
        BigRational::new(BigInt::from(self.numerators[i]), BigInt::from(self.denominator))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.numerators.iter().map(|&a| a as f64 / self.denominator as f64).collect()
    }
}

impl FromStr for RationalFrequencies {
    type Err = WlError;

    /// `"3/4,1/4"`; a bare integer `k` means `k/1`.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| -> Result<u64> {
            t.trim().parse().map_err(|_| WlError::Config(format!("bad integer '{t}' in '{s}'")))
        };
        let fractions = s
            .split(',')
            .map(|part| match part.split_once('/') {
                Some((n, d)) => Ok((parse(n)?, parse(d)?)),
                None => Ok((parse(part)?, 1)),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_fractions(&fractions)
    }
}

impl fmt::Display for RationalFrequencies {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.numerators.iter().map(|a| format!("{a}/{}", self.denominator)).collect();
        f.write_str(&parts.join(","))
    }
}

/// Point of the lattice given by its visit counts `n`; coordinates are
/// `z_i = n_i - phi_i * sum(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePoint {
    pub counts: Vec<u64>,
}

impl LatticePoint {
    pub fn new(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    pub fn origin(d: usize) -> Self {
        Self { counts: vec![0; d] }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn coordinates(&self, phi: &RationalFrequencies) -> Result<Vec<BigRational>> {
        check_len(phi, self.counts.len())?;
        let s = BigRational::from_integer(BigInt::from(self.total()));
        Ok((0..self.counts.len())
            .map(|i| BigRational::from_integer(BigInt::from(self.counts[i])) - phi.phi(i) * &s)
            .collect())
    }

    /// Count vector with the smallest total realizing the coordinates `z`.
    pub fn from_coordinates(phi: &RationalFrequencies, z: &[BigRational]) -> Result<Self> {
        check_len(phi, z.len())?;
        let sum: BigRational = z.iter().sum();
        if !sum.is_zero() {
            return Err(WlError::Domain(format!("coordinates sum to {sum}, not 0")));
        }
        let b = BigInt::from(phi.denominator());
        // n_i = z_i + a_i S / b >= 0  <=>  S >= -z_i b / a_i
        let mut s_min = BigInt::zero();
        for (i, zi) in z.iter().enumerate() {
            let a = BigInt::from(phi.numerators()[i]);
            let bound = (-zi * BigRational::from_integer(b.clone()) / BigRational::from_integer(a)).ceil().to_integer();
            if bound > s_min {
                s_min = bound;
            }
        }
        let mut s = s_min;
        for _ in 0..phi.denominator() {
            let counts: Option<Vec<u64>> = z
                .iter()
                .enumerate()
                .map(|(i, zi)| {
                    let n = zi + phi.phi(i) * BigRational::from_integer(s.clone());
                    (n.is_integer() && !n.is_negative()).then(|| n.to_integer().to_u64()).flatten()
                })
                .collect();
            if let Some(counts) = counts {
                return Ok(Self { counts });
            }
            s += 1;
        }
        Err(WlError::Domain(format!("coordinates are not a lattice point for phi = {phi}")))
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn check_len(phi: &RationalFrequencies, d: usize) -> Result<()> {
    if d != phi.len() {
        return Err(WlError::Domain(format!("dimension {d} does not match phi of length {}", phi.len())));
    }
    Ok(())
}

/// Smallest positive count vector whose coordinates are all zero: `n = a`.
pub fn zero_return_path(phi: &RationalFrequencies) -> LatticePoint {
    LatticePoint { counts: phi.numerators().to_vec() }
}

/// Counts `k` leading from `from` to `to`: `k = C n - m + m'`, with `n` the
/// zero-return vector, `m`, `m'` the counts of the endpoints and `C >= 1`
/// the smallest value making every entry nonnegative.
pub fn lattice_path(phi: &RationalFrequencies, from: &LatticePoint, to: &LatticePoint) -> Result<Vec<u64>> {
    check_len(phi, from.counts.len())?;
    check_len(phi, to.counts.len())?;
    let n = phi.numerators();
    let c = from.counts.iter().zip(n).map(|(&m, &a)| m.div_ceil(a)).max().unwrap_or(0).max(1);
    let k: Vec<u64> = (0..n.len()).map(|i| c * n[i] - from.counts[i] + to.counts[i]).collect();
    if !verify_path(phi, from, to, &k)? {
        return Err(WlError::Domain("constructed path failed exact verification".into()));
    }
    Ok(k)
}

/// Exact check of `z_from_i + k_i - phi_i * sum(k) = z_to_i` for all `i`.
pub fn verify_path(phi: &RationalFrequencies, from: &LatticePoint, to: &LatticePoint, k: &[u64]) -> Result<bool> {
    let zf = from.coordinates(phi)?;
    let zt = to.coordinates(phi)?;
    let step = LatticePoint { counts: k.to_vec() }.coordinates(phi)?;
    Ok(zf.iter().zip(&step).zip(&zt).all(|((a, s), b)| &(a + s) == b))
}
