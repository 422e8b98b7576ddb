//! Exact walk counts and the walk-count test for fractional cospectrality.
//!
//! Vertices `u` and `v` are fractionally cospectral with respect to a
//! non-diagonal `H` with eigenvectors `(p, q)`, `(-q, p)` exactly when
//!
//! ```text
//! A^k(u,u) - A^k(v,v) = c · A^k(u,v)   for every k,   c = p/q - q/p.
//! ```
//!
//! Everything here is done in arbitrary-precision integers so the identity is
//! checked without tolerance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Exact counts `A^k(x, y)` for `0 ≤ k ≤ kmax` and a set of vertex pairs.
#[derive(Debug, Clone)]
pub struct WalkTable {
    kmax: usize,
    pairs: Vec<(usize, usize)>,
    counts: Vec<Vec<BigInt>>,
}

impl WalkTable {
    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// `A^k(x, y)` if `(x, y)` or `(y, x)` was requested and `k ≤ kmax`.
    pub fn get(&self, x: usize, y: usize, k: usize) -> Option<&BigInt> {
        if k > self.kmax {
            return None;
        }
        let idx = self
            .pairs
            .iter()
            .position(|&p| p == (x, y) || p == (y, x))?;
        Some(&self.counts[idx][k])
    }

    /// All counts for a requested pair, `k = 0..=kmax`.
    pub fn series(&self, x: usize, y: usize) -> Option<&[BigInt]> {
        let idx = self
            .pairs
            .iter()
            .position(|&p| p == (x, y) || p == (y, x))?;
        Some(&self.counts[idx])
    }
}

struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    fn of(g: &Graph) -> Result<Self> {
        Ok(IntMatrix { n: g.n(), entries: g.integer_weights()? })
    }

    fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..n {
                    let a = &self.entries[i * n + j];
                    if !a.is_zero() && !x[j].is_zero() {
                        acc += a * &x[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Rows `A^k e_source` for `k = 0..=kmax`.
    fn powers_from(&self, source: usize, kmax: usize) -> Vec<Vec<BigInt>> {
        let mut x = vec![BigInt::zero(); self.n];
        x[source] = BigInt::one();
        let mut out = Vec::with_capacity(kmax + 1);
        for _ in 0..kmax {
            let next = self.apply(&x);
            out.push(x);
            x = next;
        }
        out.push(x);
        out
    }
}

/// Exact `A^k(x, y)` for the requested internal-index pairs by repeated
/// integer matrix-vector products from each distinct source vertex.
pub fn walk_counts(g: &Graph, pairs: &[(usize, usize)], kmax: usize) -> Result<WalkTable> {
    for &(x, y) in pairs {
        if x >= g.n() || y >= g.n() {
            return Err(Error::InvalidPair(format!("({x}, {y}) outside 0..{}", g.n())));
        }
    }
    let a = IntMatrix::of(g)?;
    let mut sources: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    sources.sort_unstable();
    sources.dedup();
    let rows: Vec<(usize, Vec<Vec<BigInt>>)> =
        sources.iter().map(|&s| (s, a.powers_from(s, kmax))).collect();
    let counts = pairs
        .iter()
        .map(|&(x, y)| {
            let (_, powers) = rows.iter().find(|(s, _)| *s == x).unwrap();
            powers.iter().map(|row| row[y].clone()).collect()
        })
        .collect();
    Ok(WalkTable { kmax, pairs: pairs.to_vec(), counts })
}

/// `(A^k(u,u), A^k(v,v), A^k(u,v))` for `k = 0..=kmax`.
pub fn pair_series(
    g: &Graph,
    u: usize,
    v: usize,
    kmax: usize,
) -> Result<Vec<(BigInt, BigInt, BigInt)>> {
    let table = walk_counts(g, &[(u, u), (v, v), (u, v)], kmax)?;
    let uu = table.series(u, u).unwrap();
    let vv = table.series(v, v).unwrap();
    let uv = table.series(u, v).unwrap();
    Ok((0..=kmax)
        .map(|k| (uu[k].clone(), vv[k].clone(), uv[k].clone()))
        .collect())
}

pub fn binomial(k: u64, j: i64) -> BigInt {
    if j < 0 || j as u64 > k {
        return BigInt::zero();
    }
    let j = (j as u64).min(k - j as u64);
    let mut acc = BigInt::one();
    for i in 0..j {
        acc *= k - i;
        acc /= i + 1;
    }
    acc
}

/// Reflection-principle count of walks of length `k` between vertices `x`
/// and `y` of `P_n` (labels `1..=n`):
///
/// ```text
/// A^k(x,y) = C(k, (k-(y-x))/2) - C(k, (k-(y+x))/2)   when k ≡ y-x (mod 2),
/// ```
///
/// and zero for the other parity. The formula only sees the endpoint nearest
/// the pair, so the pair is mirrored towards vertex 1 first; `None` means
/// `k > 2n - (x+y)`, where the far endpoint can interfere.
pub fn path_walk_closed_form(n: u64, x: u64, y: u64, k: u64) -> Option<BigInt> {
    assert!(
        (1..=n).contains(&x) && (1..=n).contains(&y),
        "vertices must lie in 1..=n"
    );
    let (mut x, mut y) = if x <= y { (x, y) } else { (y, x) };
    if x + y > n + 1 {
        (x, y) = (n + 1 - y, n + 1 - x);
    }
    if k + x + y > 2 * n {
        return None;
    }
    let (k, x, y) = (k as i64, x as i64, y as i64);
    if (k - (y - x)).rem_euclid(2) != 0 {
        return Some(BigInt::zero());
    }
    Some(binomial(k as u64, (k - (y - x)) / 2) - binomial(k as u64, (k - (y + x)) / 2))
}

/// Outcome of the walk-count test on a vertex pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WalkVerdict {
    /// The identity holds for every checked `k` with this constant.
    Constant(BigRational),
    /// `A^k(u,v) = 0` but `A^k(u,u) ≠ A^k(v,v)`.
    DiagonalMismatch { k: usize },
    /// Two lengths force different constants.
    RatioMismatch { k1: usize, c1: BigRational, k2: usize, c2: BigRational },
    /// No walk joins `u` and `v`; the constant is undetermined and no
    /// non-diagonal block can arise.
    Disconnected,
}

impl WalkVerdict {
    pub fn constant(&self) -> Option<&BigRational> {
        match self {
            WalkVerdict::Constant(c) => Some(c),
            _ => None,
        }
    }
}

/// Number of walk lengths checked: `0..=2n`.
pub fn checked_lengths(n: usize) -> usize {
    2 * n
}

/// Runs the walk-count test for `u ≠ v` (internal indices) over `k ≤ 2n`.
pub fn walk_cospectrality_detail(g: &Graph, u: usize, v: usize) -> Result<WalkVerdict> {
    if u == v {
        return Err(Error::InvalidPair("u and v must differ".into()));
    }
    let series = pair_series(g, u, v, checked_lengths(g.n()))?;
    let mut first: Option<(usize, BigRational)> = None;
    let mut mismatch: Option<WalkVerdict> = None;
    for (k, (uu, vv, uv)) in series.into_iter().enumerate() {
        let diff = uu - vv;
        if uv.is_zero() {
            if !diff.is_zero() && mismatch.is_none() {
                mismatch = Some(WalkVerdict::DiagonalMismatch { k });
            }
            continue;
        }
        let c = BigRational::new(diff, uv);
        match &first {
            None => first = Some((k, c)),
            Some((k1, c1)) => {
                if *c1 != c && mismatch.is_none() {
                    mismatch = Some(WalkVerdict::RatioMismatch {
                        k1: *k1,
                        c1: c1.clone(),
                        k2: k,
                        c2: c,
                    });
                }
            }
        }
    }
    Ok(match (first, mismatch) {
        (_, Some(m)) => m,
        (None, None) => WalkVerdict::Disconnected,
        (Some((_, c)), None) => WalkVerdict::Constant(c),
    })
}

/// The walk constant `c = p/q - q/p` of the pair, if it exists.
/// `c = 0` means `u` and `v` are cospectral in the ordinary sense.
pub fn walk_cospectrality(g: &Graph, u: usize, v: usize) -> Result<Option<BigRational>> {
    Ok(walk_cospectrality_detail(g, u, v)?.constant().cloned())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    // Explicit DFS over walks; only usable for small n and k.
    fn enumerate_walks(g: &Graph, x: usize, y: usize, k: usize) -> u64 {
        fn go(g: &Graph, at: usize, y: usize, left: usize) -> u64 {
            if left == 0 {
                return u64::from(at == y);
            }
            (0..g.n())
                .filter(|&w| g.weight(at, w) != 0.0)
                .map(|w| go(g, w, y, left - 1))
                .sum()
        }
        go(g, x, y, k)
    }

    #[test]
    fn table_lookups() {
        let p9 = Graph::path(9).unwrap();
        let t = walk_counts(&p9, &[(1, 1)], 4).unwrap();
        assert_eq!(t.get(1, 1, 2), Some(&int(2)));
        assert_eq!(t.get(1, 1, 4), Some(&int(5)));
        assert_eq!(t.get(1, 1, 5), None);
        assert_eq!(enumerate_walks(&p9, 1, 1, 4), 5);

        let p4 = Graph::path(4).unwrap();
        let t = walk_counts(&p4, &[(0, 2)], 3).unwrap();
        assert_eq!(t.get(2, 0, 2), Some(&int(1)));
        assert_eq!(t.get(0, 2, 0), Some(&int(0)));
        assert_eq!(t.get(0, 2, 3), Some(&int(0)));
    }

    #[test]
    fn counts_agree_with_enumeration() {
        let graphs = [
            Graph::path(7).unwrap(),
            Graph::cycle(5).unwrap(),
            Graph::from_weights(&[
                vec![0.0, 1.0, 1.0, 0.0],
                vec![1.0, 0.0, 1.0, 1.0],
                vec![1.0, 1.0, 0.0, 1.0],
                vec![0.0, 1.0, 1.0, 0.0],
            ])
            .unwrap(),
        ];
        for g in &graphs {
            let n = g.n();
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|x| (x..n).map(move |y| (x, y))).collect();
            let t = walk_counts(g, &pairs, 8).unwrap();
            for &(x, y) in &pairs {
                for k in 0..=8 {
                    assert_eq!(t.get(x, y, k).unwrap(), &int(enumerate_walks(g, x, y, k) as i64));
                }
            }
        }
    }

    #[test]
    fn weighted_counts_and_rejections() {
        let g = Graph::from_weights(&[vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
        let t = walk_counts(&g, &[(0, 0)], 2).unwrap();
        assert_eq!(t.get(0, 0, 2), Some(&int(4)));
        let g = Graph::from_weights(&[vec![0.0, 0.5], vec![0.5, 0.0]]).unwrap();
        assert!(matches!(walk_counts(&g, &[(0, 1)], 2), Err(Error::NonIntegerWeight { .. })));
        let p = Graph::path(3).unwrap();
        assert!(walk_counts(&p, &[(0, 3)], 2).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(path_walk_closed_form(9, 1, 1, 2), Some(int(1)));
        for n in 3..10 {
            assert_eq!(path_walk_closed_form(n, 1, 3, 1), Some(int(0)));
        }
        assert_eq!(path_walk_closed_form(14, 3, 9, 6), Some(int(1)));
        // beyond 2n - (x+y) the far end matters
        assert_eq!(path_walk_closed_form(4, 1, 3, 5), None);
        assert_eq!(path_walk_closed_form(4, 1, 3, 4), Some(int(3)));
        // mirrored input gives the same count
        assert_eq!(path_walk_closed_form(10, 9, 7, 4), path_walk_closed_form(10, 2, 4, 4));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 0), int(1));
        assert_eq!(binomial(6, -3), int(0));
        assert_eq!(binomial(10, 3), int(120));
        assert_eq!(binomial(3, 4), int(0));
    }

    #[test]
    fn cospectrality_examples() {
        let p14 = Graph::path(14).unwrap();
        let c = walk_cospectrality(&p14, 2, 8).unwrap();
        assert_eq!(c, Some(BigRational::from_integer(int(-1))));

        let p5 = Graph::path(5).unwrap();
        assert_eq!(walk_cospectrality(&p5, 1, 3).unwrap(), Some(BigRational::zero()));

        let p6 = Graph::path(6).unwrap();
        let verdict = walk_cospectrality_detail(&p6, 0, 2).unwrap();
        assert!(verdict.constant().is_none());
        // k = 2 forces c = (1 - 2)/1 = -1 but k = 4 forces (2 - 6)/3 = -4/3.
        let series = pair_series(&p6, 0, 2, 6).unwrap();
        assert_eq!(series[2], (int(1), int(2), int(1)));
        assert_eq!(series[4], (int(2), int(6), int(3)));
        match verdict {
            WalkVerdict::RatioMismatch { c1, c2, .. } => assert_ne!(c1, c2),
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn disconnected_pair() {
        let g = Graph::from_weights(&[
            vec![0.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(walk_cospectrality_detail(&g, 0, 2).unwrap(), WalkVerdict::Disconnected);
        assert!(walk_cospectrality(&g, 0, 0).is_err());
    }
}
