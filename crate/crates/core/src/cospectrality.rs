//! Strong fractional cospectrality from restricted eigenprojections.
//!
//! For each distinct eigenvalue `λ` the projection `E_λ` is restricted to the
//! `2 × 2` block on `{u, v}`. The pair is fractionally cospectral when every
//! such block is diagonal in one fixed orthonormal frame `(p, q)`, `(-q, p)`
//! with `p, q ≠ 0`, and strongly so when no block has weight on both axes.

use num_complex::Complex64;
use serde::Serialize;

use crate::spectra::SpectralDecomposition;

/// Restricted blocks with every entry below this are treated as zero, and
/// frame tests use the same absolute threshold.
pub const RESTRICTION_TOLERANCE: f64 = 1e-8;

/// Where an eigenvalue's restricted eigenvectors point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Group {
    /// Along `(p, q)`.
    Pi1,
    /// Along `(-q, p)`.
    Pi2,
    /// Vanishes on `{u, v}`.
    Zero,
    /// Repeated eigenvalue with weight on both directions.
    Both,
}

impl Group {
    pub fn in_pi1(self) -> bool {
        matches!(self, Group::Pi1 | Group::Both)
    }

    pub fn in_pi2(self) -> bool {
        matches!(self, Group::Pi2 | Group::Both)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CospectralityCertificate {
    pub u: usize,
    pub v: usize,
    /// `p/q - q/p`.
    pub c: f64,
    /// `(p, q)` with `p² + q² = 1`, `p > 0`.
    pub direction1: [f64; 2],
    /// `(-q, p)`.
    pub direction2: [f64; 2],
    /// One entry per eigenspace of the decomposition, same order.
    pub grouping: Vec<Group>,
    pub strong: bool,
}

impl CospectralityCertificate {
    pub fn pi1(&self) -> Vec<usize> {
        self.indices(Group::in_pi1)
    }

    pub fn pi2(&self) -> Vec<usize> {
        self.indices(Group::in_pi2)
    }

    pub fn zero(&self) -> Vec<usize> {
        self.indices(|g| g == Group::Zero)
    }

    pub fn shared(&self) -> Vec<usize> {
        self.indices(|g| g == Group::Both)
    }

    fn indices(&self, f: impl Fn(Group) -> bool) -> Vec<usize> {
        self.grouping
            .iter()
            .enumerate()
            .filter(|(_, g)| f(**g))
            .map(|(i, _)| i)
            .collect()
    }

    /// Only one direction is populated, so any limiting block is a multiple
    /// of the identity: the approximately periodic case, not revival.
    pub fn is_periodic_type(&self) -> bool {
        self.pi1().is_empty() || self.pi2().is_empty()
    }
}

/// Why a pair failed the projection test.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotCospectral {
    /// Every nonzero block is a multiple of the identity, so no walk joins
    /// `u` and `v` and no direction is defined.
    NoCoupling,
    /// The only candidate frame is the coordinate axes (`p = 0` or `q = 0`).
    AxisAligned { eigenspace: usize },
    /// Eigenspace `eigenspace` is not diagonal in the frame fixed earlier.
    Misaligned { eigenspace: usize, off_diagonal: f64 },
}

#[derive(Debug, Clone)]
pub enum CospectralityOutcome {
    Strong(CospectralityCertificate),
    /// Fractionally cospectral with a repeated eigenvalue in both groups.
    FractionalOnly(CospectralityCertificate),
    NotCospectral(NotCospectral),
}

impl CospectralityOutcome {
    pub fn certificate(&self) -> Option<&CospectralityCertificate> {
        match self {
            CospectralityOutcome::Strong(c) | CospectralityOutcome::FractionalOnly(c) => Some(c),
            CospectralityOutcome::NotCospectral(_) => None,
        }
    }

    pub fn strong_certificate(&self) -> Option<&CospectralityCertificate> {
        match self {
            CospectralityOutcome::Strong(c) => Some(c),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            CospectralityOutcome::Strong(_) => "strong",
            CospectralityOutcome::FractionalOnly(_) => "fractional",
            CospectralityOutcome::NotCospectral(_) => "none",
        }
    }
}

fn quad(r: &[[f64; 2]; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * (r[0][0] * b[0] + r[0][1] * b[1]) + a[1] * (r[1][0] * b[0] + r[1][1] * b[1])
}

/// Unit eigenvector of the larger eigenvalue of a symmetric 2×2 block.
fn principal_axis(r: &[[f64; 2]; 2]) -> [f64; 2] {
    let theta = 0.5 * (2.0 * r[0][1]).atan2(r[0][0] - r[1][1]);
    [theta.cos(), theta.sin()]
}

/// Tests `u ≠ v` (internal indices) for fractional cospectrality.
///
/// The frame comes from the first eigenspace, in descending eigenvalue
/// order, whose restricted block is nonzero and not a multiple of the
/// identity; its principal axis is `direction1`.
pub fn strong_fractional_cospectrality(
    spec: &SpectralDecomposition,
    u: usize,
    v: usize,
) -> CospectralityOutcome {
    assert_ne!(u, v, "u and v must differ");
    let n = spec.n();
    let tol = RESTRICTION_TOLERANCE;
    let blocks: Vec<[[f64; 2]; 2]> =
        spec.eigenspaces().iter().map(|e| e.restricted(n, u, v)).collect();
    let is_zero = |r: &[[f64; 2]; 2]| r.iter().flatten().all(|x| x.abs() < tol);
    let is_scalar = |r: &[[f64; 2]; 2]| r[0][1].abs() < tol && (r[0][0] - r[1][1]).abs() < tol;

    let Some(anchor) = blocks.iter().position(|r| !is_zero(r) && !is_scalar(r)) else {
        return CospectralityOutcome::NotCospectral(NotCospectral::NoCoupling);
    };
    let mut d1 = principal_axis(&blocks[anchor]);
    if d1[0] < 0.0 {
        d1 = [-d1[0], -d1[1]];
    }
    if d1[0].abs() < tol || d1[1].abs() < tol {
        return CospectralityOutcome::NotCospectral(NotCospectral::AxisAligned { eigenspace: anchor });
    }
    let d2 = [-d1[1], d1[0]];

    let mut grouping = Vec::with_capacity(blocks.len());
    for (k, r) in blocks.iter().enumerate() {
        if is_zero(r) {
            grouping.push(Group::Zero);
            continue;
        }
        let off = quad(r, d1, d2);
        if off.abs() >= tol {
            return CospectralityOutcome::NotCospectral(NotCospectral::Misaligned {
                eigenspace: k,
                off_diagonal: off,
            });
        }
        let along1 = quad(r, d1, d1) >= tol;
        let along2 = quad(r, d2, d2) >= tol;
        grouping.push(match (along1, along2) {
            (true, true) => Group::Both,
            (true, false) => Group::Pi1,
            (false, true) => Group::Pi2,
            (false, false) => Group::Zero,
        });
    }

    let (p, q) = (d1[0], d1[1]);
    let strong = !grouping.contains(&Group::Both);
    let cert = CospectralityCertificate {
        u,
        v,
        c: p / q - q / p,
        direction1: d1,
        direction2: d2,
        grouping,
        strong,
    };
    if strong {
        CospectralityOutcome::Strong(cert)
    } else {
        CospectralityOutcome::FractionalOnly(cert)
    }
}

/// The eigenvector frame of the limiting `2 × 2` block
/// `H = ρ₁ ψ₁ψ₁ᵀ + ρ₂ ψ₂ψ₂ᵀ`, `ψ₁ = (p, q)`, `ψ₂ = (-q, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RevivalTarget {
    pub c: f64,
    pub p: f64,
    pub q: f64,
}

impl RevivalTarget {
    pub fn direction1(&self) -> [f64; 2] {
        [self.p, self.q]
    }

    pub fn direction2(&self) -> [f64; 2] {
        [-self.q, self.p]
    }

    /// `p / q`.
    pub fn ratio(&self) -> f64 {
        self.p / self.q
    }

    /// `[[α, β], [β, γ]]` for unit phases `ρ₁ = e^{iδ₁}`, `ρ₂ = e^{iδ₂}`.
    pub fn block(&self, delta1: f64, delta2: f64) -> [[Complex64; 2]; 2] {
        let r1 = Complex64::from_polar(1.0, delta1);
        let r2 = Complex64::from_polar(1.0, delta2);
        let (p, q) = (self.p, self.q);
        let alpha = r1 * p * p + r2 * q * q;
        let beta = (r1 - r2) * p * q;
        let gamma = r1 * q * q + r2 * p * p;
        [[alpha, beta], [beta, gamma]]
    }

    /// Largest `|β|` any phase choice allows: `2|pq|`, reached at `ρ₁ = -ρ₂`.
    pub fn max_transfer(&self) -> f64 {
        2.0 * (self.p * self.q).abs()
    }
}

/// Frame with `p/q = (c + √(c² + 4)) / 2`, the positive root of
/// `x - 1/x = c`.
pub fn revival_target_from_constant(c: f64) -> RevivalTarget {
    let ratio = (c + (c * c + 4.0).sqrt()) / 2.0;
    let norm = (ratio * ratio + 1.0).sqrt();
    RevivalTarget { c, p: ratio / norm, q: 1.0 / norm }
}

/// Frame for a certificate's constant. When the certificate's `direction1`
/// has `q < 0` this frame is its `direction2`: same `H`, groups swapped.
pub fn revival_target(cert: &CospectralityCertificate) -> RevivalTarget {
    revival_target_from_constant(cert.c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::spectra::{cycle_spectrum, numeric_spectrum, path_spectrum};

    fn labels(spec: &SpectralDecomposition, idx: &[usize]) -> Vec<i64> {
        idx.iter().map(|&k| spec.label(k)).collect()
    }

    #[test]
    fn path_fourteen_grouping() {
        let spec = path_spectrum(14);
        let out = strong_fractional_cospectrality(&spec, 2, 8);
        let cert = out.strong_certificate().expect("strong");
        assert!((cert.c + 1.0).abs() < 1e-10);
        let by_residue = |rs: &[i64]| -> Vec<i64> {
            (1..=14).filter(|j| rs.contains(&(j % 5))).collect()
        };
        assert_eq!(labels(&spec, &cert.zero()), by_residue(&[0]));
        assert_eq!(labels(&spec, &cert.pi1()), by_residue(&[1, 4]));
        assert_eq!(labels(&spec, &cert.pi2()), by_residue(&[2, 3]));
    }

    #[test]
    fn antipodal_six_cycle() {
        let spec = cycle_spectrum(6);
        let cert = strong_fractional_cospectrality(&spec, 0, 3)
            .strong_certificate()
            .cloned()
            .expect("strong");
        assert!(cert.c.abs() < 1e-10);
        assert_eq!(labels(&spec, &cert.pi1()), vec![0, 2]);
        assert_eq!(labels(&spec, &cert.pi2()), vec![1, 3]);
        assert!(cert.zero().is_empty());
    }

    #[test]
    fn path_five_end_and_neighbour() {
        let out = strong_fractional_cospectrality(&path_spectrum(5), 0, 1);
        assert!(out.certificate().is_none());
    }

    #[test]
    fn cycle_non_antipodal_is_fractional_only() {
        let spec = cycle_spectrum(8);
        match strong_fractional_cospectrality(&spec, 0, 1) {
            CospectralityOutcome::FractionalOnly(cert) => {
                assert!(cert.c.abs() < 1e-10);
                assert!(!cert.shared().is_empty());
            }
            other => panic!("expected fractional-only, got {other:?}"),
        }
    }

    #[test]
    fn disjoint_edges_have_no_coupling() {
        let g = Graph::from_weights(&[
            vec![0.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let out = strong_fractional_cospectrality(&numeric_spectrum(&g), 0, 2);
        assert!(matches!(out, CospectralityOutcome::NotCospectral(NotCospectral::NoCoupling)));
    }

    #[test]
    fn symmetric_path_pairs_are_strongly_cospectral() {
        for n in 2..12 {
            let spec = path_spectrum(n);
            for a in 0..n / 2 {
                let cert = strong_fractional_cospectrality(&spec, a, n - 1 - a)
                    .strong_certificate()
                    .cloned()
                    .expect("symmetric pairs are strongly cospectral");
                let s = std::f64::consts::FRAC_1_SQRT_2;
                assert!((cert.direction1[0] - s).abs() < 1e-10);
                assert!((cert.direction1[1].abs() - s).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn swap_relabels_the_frame() {
        let spec = path_spectrum(14);
        let a = strong_fractional_cospectrality(&spec, 2, 8).strong_certificate().cloned().unwrap();
        let b = strong_fractional_cospectrality(&spec, 8, 2).strong_certificate().cloned().unwrap();
        assert_eq!(a.grouping, b.grouping);
        assert!((a.direction1[0] - b.direction1[1]).abs() < 1e-10);
        assert!((a.direction1[1] - b.direction1[0]).abs() < 1e-10);
        assert!((a.c + b.c).abs() < 1e-10);
    }

    #[test]
    fn targets_from_constants() {
        let t = revival_target_from_constant(0.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((t.p - s).abs() < 1e-15 && (t.q - s).abs() < 1e-15);
        assert_eq!(t.direction2(), [-t.q, t.p]);

        let t = revival_target_from_constant(-1.0);
        assert!((t.ratio() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);

        let t = revival_target_from_constant(1.5);
        assert!((t.ratio() - 2.0).abs() < 1e-15);
        assert!((t.p - 2.0 / 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn golden_ratio_frame_matches_path_four() {
        let spec = path_spectrum(4);
        let cert = strong_fractional_cospectrality(&spec, 0, 2).strong_certificate().cloned().unwrap();
        let t = revival_target(&cert);
        assert!((t.ratio() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-10);
        let block = t.block(0.0, std::f64::consts::PI);
        assert!((block[0][1].norm() - t.max_transfer()).abs() < 1e-12);
    }
}
