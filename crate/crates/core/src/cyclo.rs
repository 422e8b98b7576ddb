//! Cyclotomic polynomials and exact coordinates of `2cos(2πa/N)`.
//!
//! With `ζ = e^{2πi/N}`, `2cos(2πa/N) = ζ^a + ζ^{N-a}`. Reducing that
//! polynomial modulo `Φ_N` gives its coordinates in the power basis
//! `1, ζ, …, ζ^{φ(N)-1}` of `Q(ζ)`, so an integer combination of such
//! cosines vanishes iff the same combination of coordinate vectors does.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::spectra::ExactCosine;

/// Integer polynomial, coefficients low degree first, no trailing zeros.
pub type Poly = Vec<BigInt>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by the monic polynomial `m`.
fn div_rem_monic(a: &[BigInt], m: &[BigInt]) -> (Poly, Poly) {
    debug_assert!(m.last().is_some_and(One::is_one), "divisor must be monic");
    let dm = m.len() - 1;
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() <= dm {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dm];
    for shift in (0..rem.len() - dm).rev() {
        let lead = rem[shift + dm].clone();
        if lead.is_zero() {
            continue;
        }
        for (i, c) in m.iter().enumerate() {
            rem[shift + i] -= &lead * c;
        }
        quot[shift] = lead;
    }
    rem.truncate(dm);
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

fn x_pow_minus_one(n: usize) -> Poly {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = -BigInt::one();
    p[n] = BigInt::one();
    p
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The `N`-th cyclotomic polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicPoly {
    modulus: u64,
    coeffs: Poly,
}

impl CyclotomicPoly {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Coefficients, constant term first; length `φ(N) + 1`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Remainder of `p` modulo `Φ_N`, padded to exactly `φ(N)` coordinates.
    pub fn reduce(&self, p: &[BigInt]) -> Vec<BigInt> {
        let (_, mut rem) = div_rem_monic(p, &self.coeffs);
        rem.resize(self.degree(), BigInt::zero());
        rem
    }
}

/// `Φ_N(x) = (x^N - 1) / ∏_{d | N, d < N} Φ_d(x)`, by exact division.
pub fn cyclotomic(n: u64) -> CyclotomicPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    let divs = divisors(n);
    let mut table: BTreeMap<u64, Poly> = BTreeMap::new();
    for &d in &divs {
        let mut p = x_pow_minus_one(d as usize);
        for (&e, phi_e) in table.iter() {
            if d % e == 0 {
                let (q, r) = div_rem_monic(&p, phi_e);
                assert!(r.is_empty(), "Φ_{e} must divide x^{d} - 1");
                p = q;
            }
        }
        table.insert(d, p);
    }
    CyclotomicPoly { modulus: n, coeffs: table.remove(&n).unwrap() }
}

/// Whether `Φ_N` divides `x^N - 1` with zero remainder.
pub fn divides_x_pow_minus_one(phi: &CyclotomicPoly) -> bool {
    let (_, r) = div_rem_monic(&x_pow_minus_one(phi.modulus as usize), phi.coeffs());
    r.is_empty()
}

/// Product of all given polynomials; exposed for checks such as
/// `∏_{d | N} Φ_d = x^N - 1`.
pub fn product(polys: &[&CyclotomicPoly]) -> Poly {
    polys
        .iter()
        .fold(vec![BigInt::one()], |acc, p| poly_mul(&acc, p.coeffs()))
}

/// Least common multiple of the moduli of `vals` (1 for an empty slice).
pub fn common_modulus(vals: &[ExactCosine]) -> u64 {
    vals.iter().fold(1u64, |acc, c| acc.lcm(&c.modulus()))
}

/// Power-basis coordinates of each `2cos(2πa/N_i)` inside `Q(ζ_N)` for the
/// common modulus `N`. Returns `N` and one coordinate row per value.
pub fn cosine_coordinates(vals: &[ExactCosine]) -> (u64, Vec<Vec<BigInt>>) {
    let n = common_modulus(vals);
    let phi = cyclotomic(n);
    let rows = vals.iter().map(|c| coordinates_in(&phi, c)).collect();
    (n, rows)
}

/// Coordinates of one cosine inside `Q(ζ_N)`; `c.modulus()` must divide `N`.
pub fn coordinates_in(phi: &CyclotomicPoly, c: &ExactCosine) -> Vec<BigInt> {
    let n = phi.modulus();
    assert_eq!(n % c.modulus(), 0, "cosine modulus must divide the field modulus");
    let e = (c.numerator() * (n / c.modulus())) % n;
    let f = (n - e) % n;
    let mut p = vec![BigInt::zero(); n as usize];
    p[e as usize] += 1;
    p[f as usize] += 1;
    phi.reduce(&p)
}

/// Whether `Σ coeff · value` is exactly zero.
pub fn relation_vanishes(terms: &[(ExactCosine, BigInt)]) -> bool {
    let vals: Vec<ExactCosine> = terms.iter().map(|t| t.0).collect();
    let (_, rows) = cosine_coordinates(&vals);
    let width = rows.first().map_or(0, Vec::len);
    (0..width).all(|col| {
        terms
            .iter()
            .zip(&rows)
            .map(|((_, coef), row)| coef * &row[col])
            .sum::<BigInt>()
            .is_zero()
    })
}

/// The alternating family `Σ_{i<m} (-1)^i cos((a + ik)π/(km)) = 0`
/// for odd `m`, as signed indices over the half-angle modulus `km`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosineRelation {
    pub half_modulus: u64,
    /// `(a + ik, (-1)^i)`.
    pub terms: Vec<(u64, i64)>,
}

impl CosineRelation {
    /// Terms as exact eigenvalue-style values `2cos(π j / km)`.
    pub fn values(&self) -> Vec<(ExactCosine, BigInt)> {
        self.terms
            .iter()
            .map(|&(j, s)| (ExactCosine::from_half_angle(j as i64, self.half_modulus), BigInt::from(s)))
            .collect()
    }

    pub fn vanishes_exactly(&self) -> bool {
        relation_vanishes(&self.values())
    }

    pub fn numeric_sum(&self) -> f64 {
        self.values()
            .iter()
            .map(|(c, s)| if s.is_positive() { c.numeric() } else { -c.numeric() })
            .sum()
    }
}

/// Builds the alternating cosine relation for odd `m ≥ 3` and `0 ≤ a < k`.
pub fn cosine_relation_identity(m: u64, k: u64, a: u64) -> Result<CosineRelation> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::InvalidArgument(format!("m must be odd and at least 3, got {m}")));
    }
    if k == 0 || a >= k {
        return Err(Error::InvalidArgument(format!("need 0 <= a < k, got a = {a}, k = {k}")));
    }
    let terms = (0..m)
        .map(|i| (a + i * k, if i % 2 == 0 { 1 } else { -1 }))
        .collect();
    Ok(CosineRelation { half_modulus: k * m, terms })
}
