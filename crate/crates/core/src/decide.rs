//! Exact decision of pretty good fractional revival for cosine spectra.
//!
//! Given the grouping `Π₁ / Π₂` of a strongly fractionally cospectral pair,
//! revival holds iff no integer relation
//!
//! ```text
//! Σ ℓ_i λ_i = 0,   Σ ℓ_i = 0
//! ```
//!
//! over `Π₁ ∪ Π₂` has `Σ_{i∈Π₁} ℓ_i = ±1`. The relations form a lattice `L`
//! and `{Σ_{Π₁} ℓ : ℓ ∈ L}` is a subgroup `qZ` of the integers, so it is
//! enough to compute a basis of `L`, take `q` as the gcd of the basis
//! projections, and test `q ≠ 1`. When `q = 1` the Bezout combination of the
//! basis rows is an explicit witness.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cospectrality::{
    strong_fractional_cospectrality, CospectralityCertificate, CospectralityOutcome, Group,
    NotCospectral,
};
use crate::cyclo::{self, CyclotomicPoly};
use crate::error::{Error, Result};
use crate::lattice::{extended_gcd_all, integer_kernel};
use crate::spectra::{ExactCosine, SpectralDecomposition};

/// One coefficient of an integer relation among eigenvalues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationTerm {
    /// Eigenspace position in the decomposition.
    pub eigenspace: usize,
    /// Closed-form index `j` (or position for numeric spectra).
    pub label: i64,
    /// Group the coefficient is counted in; only [`Group::Pi1`] or
    /// [`Group::Pi2`].
    pub group: Group,
    #[serde(serialize_with = "ser_bigint")]
    pub coefficient: BigInt,
}

fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match i64::try_from(x) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&x.to_string()),
    }
}

/// Integer relations among the supported eigenvalues.
#[derive(Debug, Clone, Serialize)]
pub struct RelationLattice {
    /// Common cyclotomic modulus of the eigenvalues.
    pub modulus: u64,
    /// `(eigenspace, group)` for each lattice coordinate.
    pub ids: Vec<(usize, Group)>,
    #[serde(serialize_with = "ser_matrix")]
    pub basis: Vec<Vec<BigInt>>,
    /// Generator of `{Σ_{Π₁} ℓ}`; zero when every relation projects to 0.
    #[serde(serialize_with = "ser_bigint")]
    pub proj_gcd: BigInt,
}

fn ser_matrix<S: serde::Serializer>(
    m: &[Vec<BigInt>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        let row: Vec<String> = row.iter().map(ToString::to_string).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

impl RelationLattice {
    pub fn projection(&self, row: &[BigInt]) -> BigInt {
        row.iter()
            .zip(&self.ids)
            .filter(|(_, (_, g))| *g == Group::Pi1)
            .map(|(x, _)| x.clone())
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PgfrStatus {
    #[serde(rename = "PGFR")]
    Pgfr,
    #[serde(rename = "NoPGFR-NotCospectral")]
    NotCospectral,
    #[serde(rename = "NoPGFR-Witness")]
    Witness,
    #[serde(rename = "PeriodicOnly")]
    PeriodicOnly,
}

impl PgfrStatus {
    pub fn is_pgfr(self) -> bool {
        self == PgfrStatus::Pgfr
    }
}

impl fmt::Display for PgfrStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PgfrStatus::Pgfr => "PGFR",
            PgfrStatus::NotCospectral => "NoPGFR-NotCospectral",
            PgfrStatus::Witness => "NoPGFR-Witness",
            PgfrStatus::PeriodicOnly => "PeriodicOnly",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PgfrVerdict {
    pub status: PgfrStatus,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_bigint")]
    pub proj_gcd: Option<BigInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<RelationTerm>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<RelationLattice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub not_cospectral: Option<NotCospectral>,
}

fn ser_opt_bigint<S: serde::Serializer>(
    x: &Option<BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_bigint(v, s),
        None => s.serialize_none(),
    }
}

impl PgfrVerdict {
    fn bare(status: PgfrStatus) -> Self {
        PgfrVerdict { status, proj_gcd: None, witness: None, lattice: None, not_cospectral: None }
    }
}

/// Decides revival for a certified pair. Requires every eigenvalue in
/// `Π₁ ∪ Π₂` to be an [`ExactCosine`].
pub fn pgfr_decide(
    spec: &SpectralDecomposition,
    cert: &CospectralityCertificate,
) -> Result<PgfrVerdict> {
    if let Some(&k) = cert.shared().first() {
        // a repeated eigenvalue in both groups: λ_k - λ_k = 0 projects to 1
        let label = spec.label(k);
        let witness = vec![
            RelationTerm { eigenspace: k, label, group: Group::Pi1, coefficient: BigInt::one() },
            RelationTerm { eigenspace: k, label, group: Group::Pi2, coefficient: -BigInt::one() },
        ];
        return Ok(PgfrVerdict { witness: Some(witness), ..PgfrVerdict::bare(PgfrStatus::Witness) });
    }
    if cert.is_periodic_type() {
        return Ok(PgfrVerdict::bare(PgfrStatus::PeriodicOnly));
    }

    let ids: Vec<(usize, Group)> = cert
        .grouping
        .iter()
        .enumerate()
        .filter(|(_, g)| matches!(g, Group::Pi1 | Group::Pi2))
        .map(|(k, g)| (k, *g))
        .collect();
    let values: Vec<ExactCosine> = ids
        .iter()
        .map(|&(k, _)| spec.eigenspaces()[k].value.exact().ok_or(Error::InexactSpectrum))
        .collect::<Result<_>>()?;

    let (modulus, coords) = cyclo::cosine_coordinates(&values);
    let matrix: Vec<Vec<BigInt>> = coords
        .into_iter()
        .map(|mut row| {
            row.push(BigInt::one());
            row
        })
        .collect();
    let basis = integer_kernel(&matrix);

    let mut lattice = RelationLattice { modulus, ids, basis, proj_gcd: BigInt::zero() };
    let projections: Vec<BigInt> = lattice.basis.iter().map(|r| lattice.projection(r)).collect();
    let (q, bezout) = extended_gcd_all(&projections);
    lattice.proj_gcd = q.clone();

    if !q.is_one() {
        return Ok(PgfrVerdict {
            proj_gcd: Some(q),
            lattice: Some(lattice),
            ..PgfrVerdict::bare(PgfrStatus::Pgfr)
        });
    }

    let mut combo = vec![BigInt::zero(); lattice.ids.len()];
    for (row, x) in lattice.basis.iter().zip(&bezout) {
        if x.is_zero() {
            continue;
        }
        for (c, r) in combo.iter_mut().zip(row) {
            *c += x * r;
        }
    }
    let witness = combo
        .iter()
        .zip(&lattice.ids)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, &(k, g))| RelationTerm {
            eigenspace: k,
            label: spec.label(k),
            group: g,
            coefficient: c.clone(),
        })
        .collect();
    Ok(PgfrVerdict {
        proj_gcd: Some(q),
        witness: Some(witness),
        lattice: Some(lattice),
        ..PgfrVerdict::bare(PgfrStatus::Witness)
    })
}

/// Full pipeline for one pair: projection test, then the lattice decision.
pub fn decide_pair(spec: &SpectralDecomposition, u: usize, v: usize) -> Result<PgfrVerdict> {
    match strong_fractional_cospectrality(spec, u, v) {
        CospectralityOutcome::NotCospectral(why) => Ok(PgfrVerdict {
            not_cospectral: Some(why),
            ..PgfrVerdict::bare(PgfrStatus::NotCospectral)
        }),
        CospectralityOutcome::Strong(cert) | CospectralityOutcome::FractionalOnly(cert) => {
            pgfr_decide(spec, &cert)
        }
    }
}

/// Result of checking a candidate relation against a spectrum and grouping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    /// `Σ ℓ_i λ_i = 0` in cyclotomic coordinates.
    pub eigen_sum_vanishes: bool,
    pub coefficient_sum: BigInt,
    pub pi1_projection: BigInt,
}

impl RelationCheck {
    /// A relation that rules revival out.
    pub fn is_witness(&self) -> bool {
        self.eigen_sum_vanishes && self.coefficient_sum.is_zero() && self.pi1_projection.abs().is_one()
    }
}

/// Evaluates `Σ ℓλ`, `Σ ℓ`, and `Σ_{Π₁} ℓ` exactly for the given terms.
pub fn check_relation(spec: &SpectralDecomposition, terms: &[RelationTerm]) -> Result<RelationCheck> {
    let values: Vec<(ExactCosine, BigInt)> = terms
        .iter()
        .map(|t| {
            let v = spec.eigenspaces()[t.eigenspace].value.exact().ok_or(Error::InexactSpectrum)?;
            Ok((v, t.coefficient.clone()))
        })
        .collect::<Result<_>>()?;
    Ok(RelationCheck {
        eigen_sum_vanishes: values.is_empty() || cyclo::relation_vanishes(&values),
        coefficient_sum: terms.iter().map(|t| t.coefficient.clone()).sum(),
        pi1_projection: terms
            .iter()
            .filter(|t| t.group == Group::Pi1)
            .map(|t| t.coefficient.clone())
            .sum(),
    })
}

/// Builds relation terms from `(label, coefficient)` pairs, placing each
/// term in its eigenspace's group. Labels repeated or absent from the
/// spectrum are rejected; shared eigenvalues are rejected as ambiguous.
pub fn terms_from_labels(
    spec: &SpectralDecomposition,
    cert: &CospectralityCertificate,
    coefficients: &[(i64, i64)],
) -> Result<Vec<RelationTerm>> {
    let mut out: Vec<RelationTerm> = Vec::new();
    for &(label, c) in coefficients {
        let k = (0..spec.len())
            .find(|&k| spec.label(k) == label)
            .ok_or_else(|| Error::InvalidArgument(format!("no eigenvalue with index {label}")))?;
        let group = cert.grouping[k];
        if group == Group::Both {
            return Err(Error::InvalidArgument(format!("eigenvalue {label} is in both groups")));
        }
        match out.iter_mut().find(|t| t.eigenspace == k) {
            Some(t) => t.coefficient += c,
            None => out.push(RelationTerm { eigenspace: k, label, group, coefficient: BigInt::from(c) }),
        }
    }
    Ok(out)
}

/// Convenience: the cyclotomic polynomial a lattice was computed over.
pub fn lattice_field(lattice: &RelationLattice) -> CyclotomicPoly {
    cyclo::cyclotomic(lattice.modulus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{cycle_spectrum, path_spectrum};

    fn decide(spec: &SpectralDecomposition, u: usize, v: usize) -> PgfrVerdict {
        decide_pair(spec, u, v).unwrap()
    }

    #[test]
    fn path_four_asymmetric_pair_revives() {
        let v = decide(&path_spectrum(4), 0, 2);
        assert_eq!(v.status, PgfrStatus::Pgfr);
        let q = v.proj_gcd.unwrap();
        assert!(q.is_zero() || (&q % 2u32).is_zero(), "proj_gcd {q} should be even");
    }

    #[test]
    fn path_fourteen_has_witness() {
        let spec = path_spectrum(14);
        let v = decide(&spec, 2, 8);
        assert_eq!(v.status, PgfrStatus::Witness);
        assert_eq!(v.proj_gcd, Some(BigInt::one()));
        let check = check_relation(&spec, v.witness.as_ref().unwrap()).unwrap();
        assert!(check.is_witness(), "{check:?}");
    }

    #[test]
    fn constructed_path_witness_is_valid() {
        let spec = path_spectrum(14);
        let cert = strong_fractional_cospectrality(&spec, 2, 8).strong_certificate().cloned().unwrap();
        let terms =
            terms_from_labels(&spec, &cert, &[(1, 1), (6, -1), (11, 1), (2, -1), (7, 1), (12, -1)])
                .unwrap();
        let check = check_relation(&spec, &terms).unwrap();
        assert!(check.eigen_sum_vanishes);
        assert!(check.coefficient_sum.is_zero());
        assert_eq!(check.pi1_projection, BigInt::one());
    }

    #[test]
    fn six_cycle_antipodes_revive() {
        let v = decide(&cycle_spectrum(6), 0, 3);
        assert_eq!(v.status, PgfrStatus::Pgfr);
    }

    #[test]
    fn shared_eigenvalue_gives_two_term_witness() {
        let spec = cycle_spectrum(8);
        let v = decide(&spec, 0, 1);
        assert_eq!(v.status, PgfrStatus::Witness);
        let w = v.witness.unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w[0].eigenspace, w[1].eigenspace);
        let check = check_relation(&spec, &w).unwrap();
        assert!(check.is_witness());
    }

    #[test]
    fn non_cospectral_pair() {
        let v = decide(&path_spectrum(5), 0, 1);
        assert_eq!(v.status, PgfrStatus::NotCospectral);
        assert!(v.not_cospectral.is_some());
    }

    #[test]
    fn lattice_rows_are_relations() {
        let spec = path_spectrum(9);
        let v = decide(&spec, 1, 5);
        let lattice = v.lattice.unwrap();
        let phi = lattice_field(&lattice);
        assert_eq!(phi.modulus(), lattice.modulus);
        for row in &lattice.basis {
            let terms: Vec<RelationTerm> = row
                .iter()
                .zip(&lattice.ids)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, &(k, g))| RelationTerm {
                    eigenspace: k,
                    label: spec.label(k),
                    group: g,
                    coefficient: c.clone(),
                })
                .collect();
            let check = check_relation(&spec, &terms).unwrap();
            assert!(check.eigen_sum_vanishes);
            assert!(check.coefficient_sum.is_zero());
            if lattice.proj_gcd.is_zero() {
                assert!(check.pi1_projection.is_zero());
            } else {
                assert!((&check.pi1_projection % &lattice.proj_gcd).is_zero());
            }
        }
    }
}
