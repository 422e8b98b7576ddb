//! Closed-form eigensystems of paths and cycles, and a numeric fallback for
//! arbitrary graphs.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::graph::{Family, Graph};
use crate::jacobi;

/// Numeric eigenvalues closer than this are merged into one eigenspace.
pub const CLUSTER_TOLERANCE: f64 = 1e-9;

/// The algebraic integer `2 cos(2π a / N)`, kept in canonical form:
/// `gcd(a, N) = 1` (or `a = 0, N = 1`) and `0 ≤ a ≤ N/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ExactCosine {
    a: u64,
    modulus: u64,
}

impl ExactCosine {
    /// `2 cos(2π a / N)` for any integer `a` and `N ≥ 1`.
    pub fn new(a: i64, modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let m = modulus as i64;
        let mut a = a.rem_euclid(m) as u64;
        if 2 * a > modulus {
            a = modulus - a;
        }
        let g = a.gcd(&modulus);
        ExactCosine { a: a / g, modulus: modulus / g }
    }

    /// `2 cos(π j / m)`, the form path eigenvalues are usually written in.
    pub fn from_half_angle(j: i64, m: u64) -> Self {
        Self::new(j, 2 * m)
    }

    pub fn numerator(&self) -> u64 {
        self.a
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn numeric(&self) -> f64 {
        2.0 * (2.0 * PI * self.a as f64 / self.modulus as f64).cos()
    }
}

impl fmt::Display for ExactCosine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2*cos(2*pi*{}/{})", self.a, self.modulus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Eigenvalue {
    Exact(ExactCosine),
    Float { value: f64 },
}

impl Eigenvalue {
    pub fn numeric(&self) -> f64 {
        match self {
            Eigenvalue::Exact(c) => c.numeric(),
            Eigenvalue::Float { value } => *value,
        }
    }

    pub fn exact(&self) -> Option<ExactCosine> {
        match self {
            Eigenvalue::Exact(c) => Some(*c),
            Eigenvalue::Float { .. } => None,
        }
    }
}

/// One distinct eigenvalue with its orthogonal projection.
#[derive(Debug, Clone)]
pub struct Eigenspace {
    pub value: Eigenvalue,
    pub multiplicity: usize,
    /// Closed-form index `j` (`λ_j = 2cos(πj/(n+1))` on paths,
    /// `λ_j = 2cos(2πj/n)` with `0 ≤ j ≤ n/2` on cycles).
    pub label: Option<i64>,
    /// Row-major `n × n` projection `E_λ`.
    pub projection: Vec<f64>,
}

impl Eigenspace {
    pub fn numeric(&self) -> f64 {
        self.value.numeric()
    }

    /// `E_λ` restricted to rows and columns `{u, v}`.
    pub fn restricted(&self, n: usize, u: usize, v: usize) -> [[f64; 2]; 2] {
        let e = &self.projection;
        [[e[u * n + u], e[u * n + v]], [e[v * n + u], e[v * n + v]]]
    }
}

/// Distinct eigenvalues in descending order, each with its projection.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    n: usize,
    family: Family,
    eigenspaces: Vec<Eigenspace>,
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn eigenspaces(&self) -> &[Eigenspace] {
        &self.eigenspaces
    }

    pub fn len(&self) -> usize {
        self.eigenspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenspaces.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.eigenspaces.iter().all(|e| e.value.exact().is_some())
    }

    /// `(value, multiplicity)` pairs, descending.
    pub fn eigenvalues(&self) -> Vec<(f64, usize)> {
        self.eigenspaces.iter().map(|e| (e.numeric(), e.multiplicity)).collect()
    }

    /// User-facing label for eigenspace `k`: the closed-form index when known,
    /// otherwise the position in descending order.
    pub fn label(&self, k: usize) -> i64 {
        self.eigenspaces[k].label.unwrap_or(k as i64)
    }

    /// `max |Σ E_λ - I|`.
    pub fn completeness_error(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let s: f64 = self.eigenspaces.iter().map(|e| e.projection[i * n + j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }

    /// `max |E_λ E_μ - δ_λμ E_λ|` over all pairs.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for (a, ea) in self.eigenspaces.iter().enumerate() {
            for (b, eb) in self.eigenspaces.iter().enumerate().skip(a) {
                let prod = matmul(&ea.projection, &eb.projection, n);
                for idx in 0..n * n {
                    let target = if a == b { ea.projection[idx] } else { 0.0 };
                    worst = worst.max((prod[idx] - target).abs());
                }
            }
        }
        worst
    }

    /// `max |Σ λ E_λ - A|`.
    pub fn reconstruction_error(&self, g: &Graph) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let s: f64 = self
                    .eigenspaces
                    .iter()
                    .map(|e| e.numeric() * e.projection[i * n + j])
                    .sum();
                worst = worst.max((s - g.weight(i, j)).abs());
            }
        }
        worst
    }
}

pub(crate) fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

fn outer_add(target: &mut [f64], x: &[f64]) {
    let n = x.len();
    for i in 0..n {
        for j in 0..n {
            target[i * n + j] += x[i] * x[j];
        }
    }
}

/// `sin(π r / m)` with `r` reduced mod `2m` first to keep the argument small.
fn sin_pi_ratio(r: u64, m: u64) -> f64 {
    (PI * (r % (2 * m)) as f64 / m as f64).sin()
}

fn cos_pi_ratio(r: u64, m: u64) -> f64 {
    (PI * (r % (2 * m)) as f64 / m as f64).cos()
}

/// Spectrum of `P_n`: `λ_j = 2cos(πj/(n+1))`, eigenvector entries
/// `sin(πkj/(n+1))`, `j, k = 1..n`.
pub fn path_spectrum(n: usize) -> SpectralDecomposition {
    assert!(n >= 1, "a path needs at least one vertex");
    let m = (n + 1) as u64;
    let norm = (2.0 / m as f64).sqrt();
    let eigenspaces = (1..=n as u64)
        .map(|j| {
            let x: Vec<f64> = (1..=n as u64).map(|k| norm * sin_pi_ratio(k * j, m)).collect();
            let mut projection = vec![0.0; n * n];
            outer_add(&mut projection, &x);
            Eigenspace {
                value: Eigenvalue::Exact(ExactCosine::from_half_angle(j as i64, m)),
                multiplicity: 1,
                label: Some(j as i64),
                projection,
            }
        })
        .collect();
    SpectralDecomposition { n, family: Family::Path, eigenspaces }
}

/// Spectrum of `C_n`: `λ_j = 2cos(2πj/n)` for `0 ≤ j ≤ n/2`; `λ_j = λ_{n-j}`
/// so every `0 < j < n/2` is doubled. Projections are assembled from the
/// real cosine/sine pair spanning each doubled eigenspace.
pub fn cycle_spectrum(n: usize) -> SpectralDecomposition {
    assert!(n >= 3, "a cycle needs at least three vertices");
    let nn = n as u64;
    let eigenspaces = (0..=nn / 2)
        .map(|j| {
            let mut projection = vec![0.0; n * n];
            let simple = j == 0 || 2 * j == nn;
            if simple {
                let norm = 1.0 / (n as f64).sqrt();
                let x: Vec<f64> = (0..nn)
                    .map(|k| if j == 0 || k % 2 == 0 { norm } else { -norm })
                    .collect();
                outer_add(&mut projection, &x);
            } else {
                let norm = (2.0 / n as f64).sqrt();
                // cos(2πjk/n) = cos(π (2jk) / n)
                let c: Vec<f64> = (0..nn).map(|k| norm * cos_pi_ratio(2 * j * k, nn)).collect();
                let s: Vec<f64> = (0..nn).map(|k| norm * sin_pi_ratio(2 * j * k, nn)).collect();
                outer_add(&mut projection, &c);
                outer_add(&mut projection, &s);
            }
            Eigenspace {
                value: Eigenvalue::Exact(ExactCosine::new(j as i64, nn)),
                multiplicity: if simple { 1 } else { 2 },
                label: Some(j as i64),
                projection,
            }
        })
        .collect();
    SpectralDecomposition { n, family: Family::Cycle, eigenspaces }
}

/// Eigendecomposition of any graph through the Jacobi solver. Eigenvalues
/// within [`CLUSTER_TOLERANCE`] of their predecessor share an eigenspace.
pub fn numeric_spectrum(g: &Graph) -> SpectralDecomposition {
    let n = g.n();
    let eig = jacobi::symmetric_eigen(g.weights(), n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.values[b].partial_cmp(&eig.values[a]).unwrap_or(Ordering::Equal));

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        match clusters.last_mut() {
            Some(last)
                if (eig.values[*last.last().unwrap()] - eig.values[k]).abs()
                    <= CLUSTER_TOLERANCE =>
            {
                last.push(k)
            }
            _ => clusters.push(vec![k]),
        }
    }

    let eigenspaces = clusters
        .into_iter()
        .map(|members| {
            let mut projection = vec![0.0; n * n];
            for &k in &members {
                let x: Vec<f64> = (0..n).map(|i| eig.vectors[i * n + k]).collect();
                outer_add(&mut projection, &x);
            }
            let value =
                members.iter().map(|&k| eig.values[k]).sum::<f64>() / members.len() as f64;
            Eigenspace {
                value: Eigenvalue::Float { value },
                multiplicity: members.len(),
                label: None,
                projection,
            }
        })
        .collect();
    SpectralDecomposition { n, family: g.family(), eigenspaces }
}

/// Closed form when the graph is a path or cycle, numeric otherwise.
pub fn spectrum(g: &Graph) -> SpectralDecomposition {
    match g.family() {
        Family::Path => path_spectrum(g.n()),
        Family::Cycle => cycle_spectrum(g.n()),
        Family::General => numeric_spectrum(g),
    }
}
