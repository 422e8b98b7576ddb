//! Numerical continuous-time quantum walk `U(t) = e^{itA}` and the search for
//! near-revival times.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cospectrality::{CospectralityCertificate, Group};
use crate::spectra::SpectralDecomposition;

/// `U(t) = Σ_λ e^{itλ} E_λ`, row-major `n × n`.
pub fn evolve(spec: &SpectralDecomposition, t: f64) -> Vec<Complex64> {
    let n = spec.n();
    let mut u = vec![Complex64::new(0.0, 0.0); n * n];
    for e in spec.eigenspaces() {
        let phase = Complex64::from_polar(1.0, t * e.numeric());
        for (x, p) in u.iter_mut().zip(&e.projection) {
            *x += phase * p;
        }
    }
    u
}

/// `max |U U* - I|`.
pub fn unitarity_error(u: &[Complex64], n: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                s += u[i * n + k] * u[j * n + k].conj();
            }
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((s - target).norm());
        }
    }
    worst
}

/// Rows `u` and `v` of `U(t)` only; cheap enough to evaluate on dense time grids.
#[derive(Debug, Clone)]
pub struct PairPropagator {
    n: usize,
    u: usize,
    v: usize,
    values: Vec<f64>,
    row_u: Vec<Vec<f64>>,
    row_v: Vec<Vec<f64>>,
}

/// `U(t)` seen from the pair `{u, v}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairSnapshot {
    pub t: f64,
    /// Largest off-block row norm over rows `u` and `v`.
    pub leakage: f64,
    /// `|U(t)(u, v)|`.
    pub transfer: f64,
    /// `|U(t)(u, u)|`.
    pub stay: f64,
    #[serde(skip)]
    pub block: [[Complex64; 2]; 2],
}

impl PairPropagator {
    pub fn new(spec: &SpectralDecomposition, u: usize, v: usize) -> Self {
        assert_ne!(u, v, "u and v must differ");
        let n = spec.n();
        let mut values = Vec::new();
        let mut row_u = Vec::new();
        let mut row_v = Vec::new();
        for e in spec.eigenspaces() {
            let ru = e.projection[u * n..(u + 1) * n].to_vec();
            let rv = e.projection[v * n..(v + 1) * n].to_vec();
            // eigenspaces invisible from both rows never contribute
            if ru.iter().chain(&rv).all(|x| *x == 0.0) {
                continue;
            }
            values.push(e.numeric());
            row_u.push(ru);
            row_v.push(rv);
        }
        PairPropagator { n, u, v, values, row_u, row_v }
    }

    pub fn at(&self, t: f64) -> PairSnapshot {
        let n = self.n;
        let mut ru = vec![Complex64::new(0.0, 0.0); n];
        let mut rv = vec![Complex64::new(0.0, 0.0); n];
        for (k, &lambda) in self.values.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, t * lambda);
            for w in 0..n {
                ru[w] += phase * self.row_u[k][w];
                rv[w] += phase * self.row_v[k][w];
            }
        }
        let off = |row: &[Complex64]| -> f64 {
            row.iter()
                .enumerate()
                .filter(|(w, _)| *w != self.u && *w != self.v)
                .map(|(_, z)| z.norm_sqr())
                .sum::<f64>()
                .sqrt()
        };
        let (u, v) = (self.u, self.v);
        PairSnapshot {
            t,
            leakage: off(&ru).max(off(&rv)),
            transfer: ru[v].norm(),
            stay: ru[u].norm(),
            block: [[ru[u], ru[v]], [rv[u], rv[v]]],
        }
    }
}

/// Off-block row magnitude of `U(t)` on `{u, v}`.
pub fn leakage(spec: &SpectralDecomposition, u: usize, v: usize, t: f64) -> f64 {
    PairPropagator::new(spec, u, v).at(t).leakage
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchParams {
    pub t_max: f64,
    pub grid_step: f64,
    /// Minimum `|U(t)(u, v)|` for a time to count as a revival candidate.
    pub transfer_floor: f64,
    pub refine_iterations: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams { t_max: 1e3, grid_step: 0.01, transfer_floor: 0.05, refine_iterations: 60 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RevivalReport {
    pub t_best: f64,
    pub leakage: f64,
    /// Leakage at the grid point the refinement started from.
    pub coarse_leakage: f64,
    pub coarse_t: f64,
    pub transfer: f64,
    pub stay: f64,
    #[serde(skip)]
    pub block: [[Complex64; 2]; 2],
    /// Local minima that were refined.
    pub candidates: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found(RevivalReport),
    /// No grid time reached the transfer floor.
    NoCandidate { max_transfer: f64 },
}

impl SearchOutcome {
    pub fn report(&self) -> Option<&RevivalReport> {
        match self {
            SearchOutcome::Found(r) => Some(r),
            SearchOutcome::NoCandidate { .. } => None,
        }
    }
}

/// Leakage, transfer and `|U_uu|` at every grid time `i·step`, `1 ≤ i`,
/// `i·step ≤ t_max`.
pub fn scan(prop: &PairPropagator, t_max: f64, step: f64) -> Vec<PairSnapshot> {
    let count = (t_max / step + 1e-9).floor() as usize;
    (1..=count).into_par_iter().map(|i| prop.at(i as f64 * step)).collect()
}

/// Golden-section minimisation of `f` on `[lo, hi]`.
pub fn golden_section(mut lo: f64, mut hi: f64, iterations: usize, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iterations {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Coarse grid scan of leakage restricted to times with
/// `|U(u,v)| ≥ transfer_floor`, then golden-section refinement within
/// `±grid_step` of every admissible local minimum of the coarse leakage.
/// Ties resolve to the smaller time.
pub fn search_revival(
    spec: &SpectralDecomposition,
    u: usize,
    v: usize,
    params: &SearchParams,
) -> SearchOutcome {
    assert!(params.t_max > 0.0 && params.grid_step > 0.0, "t_max and grid_step must be positive");
    assert!((0.0..1.0).contains(&params.transfer_floor), "transfer floor must lie in [0, 1)");
    let prop = PairPropagator::new(spec, u, v);
    let samples = scan(&prop, params.t_max, params.grid_step);
    let admissible = |s: &PairSnapshot| s.transfer >= params.transfer_floor;

    let minima: Vec<usize> = (0..samples.len())
        .filter(|&i| {
            let l = samples[i].leakage;
            admissible(&samples[i])
                && (i == 0 || samples[i - 1].leakage >= l)
                && (i + 1 == samples.len() || samples[i + 1].leakage >= l)
        })
        .collect();
    if minima.is_empty() {
        let max_transfer = samples.iter().map(|s| s.transfer).fold(0.0, f64::max);
        return SearchOutcome::NoCandidate { max_transfer };
    }

    let step = params.grid_step;
    let refined: Vec<(PairSnapshot, PairSnapshot)> = minima
        .par_iter()
        .map(|&i| {
            let coarse = samples[i];
            let lo = (coarse.t - step).max(f64::MIN_POSITIVE);
            let hi = (coarse.t + step).min(params.t_max);
            let (t, _) = golden_section(lo, hi, params.refine_iterations, |t| prop.at(t).leakage);
            let fine = prop.at(t);
            let best = if admissible(&fine) && fine.leakage < coarse.leakage { fine } else { coarse };
            (coarse, best)
        })
        .collect();

    let (coarse, best) = refined
        .iter()
        .copied()
        .min_by(|a, b| a.1.leakage.total_cmp(&b.1.leakage).then(a.1.t.total_cmp(&b.1.t)))
        .unwrap();
    SearchOutcome::Found(RevivalReport {
        t_best: best.t,
        leakage: best.leakage,
        coarse_leakage: coarse.leakage,
        coarse_t: coarse.t,
        transfer: best.transfer,
        stay: best.stay,
        block: best.block,
        candidates: minima.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseFit {
    /// Circular mean of `tλ` over `Π₁`, in `[0, 2π)`.
    pub delta1: f64,
    pub delta2: f64,
    /// Largest angular distance of any `tλ` from its group's mean.
    pub residual: f64,
}

fn wrap(x: f64) -> f64 {
    x.rem_euclid(TAU)
}

fn angular_distance(a: f64, b: f64) -> f64 {
    let d = wrap(a - b);
    d.min(TAU - d)
}

/// How close `t` puts the phases `tλ` to two common targets, one per group.
pub fn phase_fit(spec: &SpectralDecomposition, cert: &CospectralityCertificate, t: f64) -> PhaseFit {
    let group_angles = |pick: fn(Group) -> bool| -> Vec<f64> {
        spec.eigenspaces()
            .iter()
            .zip(&cert.grouping)
            .filter(|(_, g)| pick(**g))
            .map(|(e, _)| t * e.numeric())
            .collect()
    };
    let fit = |angles: &[f64]| -> (f64, f64) {
        if angles.is_empty() {
            return (0.0, 0.0);
        }
        let (s, c) = angles.iter().fold((0.0, 0.0), |(s, c), a| (s + a.sin(), c + a.cos()));
        let mean = if s.abs() < 1e-300 && c.abs() < 1e-300 { 0.0 } else { wrap(s.atan2(c)) };
        let spread = angles.iter().map(|&a| angular_distance(a, mean)).fold(0.0, f64::max);
        (mean, spread)
    };
    let (d1, r1) = fit(&group_angles(Group::in_pi1));
    let (d2, r2) = fit(&group_angles(Group::in_pi2));
    PhaseFit { delta1: d1, delta2: d2, residual: r1.max(r2) }
}

/// `δ₁ - δ₂` folded into `[0, π]`.
pub fn phase_gap(fit: &PhaseFit) -> f64 {
    angular_distance(fit.delta1, fit.delta2).min(PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cospectrality::strong_fractional_cospectrality;
    use crate::graph::Graph;
    use crate::spectra::{cycle_spectrum, numeric_spectrum, path_spectrum};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn identity_at_zero() {
        let spec = path_spectrum(5);
        let u = evolve(&spec, 0.0);
        for i in 0..5 {
            for j in 0..5 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((u[i * 5 + j] - target).norm() < 1e-12);
            }
        }
        assert!(leakage(&spec, 0, 2, 0.0) < 1e-12);
    }

    #[test]
    fn perfect_transfer_on_p2_and_c4() {
        let u = evolve(&path_spectrum(2), FRAC_PI_2);
        assert!(u[1].norm() > 1.0 - 1e-12);
        let u = evolve(&cycle_spectrum(4), FRAC_PI_2);
        assert!(u[2].norm() > 1.0 - 1e-12);
    }

    #[test]
    fn whole_graph_block_never_leaks() {
        let spec = path_spectrum(2);
        for t in [0.3, 1.7, 40.0] {
            assert!(leakage(&spec, 0, 1, t) < 1e-12);
        }
    }

    #[test]
    fn leakage_matches_unitarity_identity() {
        let spec = path_spectrum(4);
        let s = PairPropagator::new(&spec, 0, 2).at(0.1);
        assert!(s.leakage > 0.0 && s.leakage < 1.0);
        let row = (1.0 - s.stay.powi(2) - s.transfer.powi(2)).sqrt();
        let full = evolve(&spec, 0.1);
        let row_u: f64 = [1usize, 3].iter().map(|&w| full[w].norm_sqr()).sum::<f64>().sqrt();
        assert!((row - row_u).abs() < 1e-12);
        assert!(s.leakage >= row_u - 1e-15);
    }

    #[test]
    fn spectral_and_numeric_routes_agree() {
        let g = Graph::cycle(7).unwrap();
        let a = evolve(&cycle_spectrum(7), 2.3);
        let b = evolve(&numeric_spectrum(&g), 2.3);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-10);
        }
        assert!(unitarity_error(&a, 7) < 1e-10);
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, fx) = golden_section(-1.0, 3.0, 80, |x| (x - 1.25).powi(2) + 0.5);
        assert!((x - 1.25).abs() < 1e-8);
        assert!((fx - 0.5).abs() < 1e-12);
    }

    #[test]
    fn phase_fit_examples() {
        let spec = cycle_spectrum(4);
        let cert = strong_fractional_cospectrality(&spec, 0, 2).strong_certificate().cloned().unwrap();
        let fit = phase_fit(&spec, &cert, 0.0);
        assert_eq!((fit.delta1, fit.delta2, fit.residual), (0.0, 0.0, 0.0));
        let fit = phase_fit(&spec, &cert, FRAC_PI_2);
        assert!((phase_gap(&fit) - PI).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn floor_excludes_everything_when_unreachable() {
        // a single edge never leaves the block, but with a floor near 1 the
        // grid must still land on |U(1,2)| = |sin t| ≥ 0.999999
        let spec = path_spectrum(2);
        let out = search_revival(
            &spec,
            0,
            1,
            &SearchParams { t_max: 1.0, grid_step: 0.1, transfer_floor: 0.99, refine_iterations: 20 },
        );
        assert!(matches!(out, SearchOutcome::NoCandidate { .. }));
    }
}
