//! Weighted undirected graphs and the builders for the families analysed here.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest |w(i,j) - w(j,i)| accepted by [`Graph::from_weights`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Which closed-form family a graph was built as.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Path on vertices `1..=n`.
    Path,
    /// Cycle on `Z_n`, vertices `0..n`.
    Cycle,
    /// Anything built from an explicit matrix; vertices `0..n`.
    General,
}

impl Family {
    /// Label of the first vertex.
    pub fn first_label(self) -> i64 {
        match self {
            Family::Path => 1,
            Family::Cycle | Family::General => 0,
        }
    }

    pub fn convention(self) -> &'static str {
        match self {
            Family::Path => "1-based",
            Family::Cycle | Family::General => "0-based",
        }
    }
}

/// Symmetric weighted adjacency structure on `n` labelled vertices.
///
/// The float matrix is always present. When every input weight is rational the
/// exact rational matrix is stored alongside it; walk counting uses that one.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    family: Family,
    weights: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

impl Graph {
    /// Path `P_n` with vertices labelled `1..=n` and edges `i ~ i+1`.
    pub fn path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("a path needs at least one vertex".into()));
        }
        let mut g = Self::empty(n, Family::Path);
        for i in 0..n.saturating_sub(1) {
            g.set_unit_edge(i, i + 1);
        }
        Ok(g)
    }

    /// Cycle `C_n` on `Z_n`, vertex `a` adjacent to `a - 1` and `a + 1`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!(
                "a cycle needs at least three vertices, got {n}"
            )));
        }
        let mut g = Self::empty(n, Family::Cycle);
        for i in 0..n {
            g.set_unit_edge(i, (i + 1) % n);
        }
        Ok(g)
    }

    /// Wraps a dense real matrix. Asymmetry beyond [`SYMMETRY_TOLERANCE`] is
    /// rejected; accepted input is stored with the lower triangle mirrored
    /// from the upper so the stored matrix is exactly symmetric.
    ///
    /// Finite doubles are dyadic rationals, so the exact form is always kept.
    pub fn from_weights(matrix: &[Vec<f64>]) -> Result<Self> {
        let n = check_square(matrix.iter().map(Vec::len), matrix.len())?;
        let mut flat = Vec::with_capacity(n * n);
        for row in matrix {
            for &w in row {
                if !w.is_finite() {
                    return Err(Error::InvalidGraph(format!("non-finite weight {w}")));
                }
                flat.push(w);
            }
        }
        check_symmetric(n, &flat)?;
        let mut exact = Vec::with_capacity(n * n);
        for &w in &flat {
            exact.push(BigRational::from_float(w).expect("finite"));
        }
        Ok(Self::symmetrized(n, Family::General, flat, Some(exact)))
    }

    /// Wraps an exact rational matrix. Rational input must be exactly symmetric.
    pub fn from_rational_weights(matrix: &[Vec<BigRational>]) -> Result<Self> {
        let n = check_square(matrix.iter().map(Vec::len), matrix.len())?;
        let exact: Vec<BigRational> = matrix.iter().flatten().cloned().collect();
        let flat: Vec<f64> = exact.iter().map(|w| w.to_f64().unwrap_or(f64::NAN)).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                if exact[i * n + j] != exact[j * n + i] {
                    let dev = (flat[i * n + j] - flat[j * n + i]).abs();
                    return Err(Error::Asymmetric { max_deviation: dev, row: i, col: j });
                }
            }
        }
        Ok(Self::symmetrized(n, Family::General, flat, Some(exact)))
    }

    /// Parses a whitespace-separated dense matrix, one row per line. Blank
    /// lines and lines starting with `#` are skipped. Integer, `p/q` and plain
    /// decimal tokens are read exactly; anything else falls back to `f64` and
    /// drops the exact form.
    pub fn parse_matrix(text: &str) -> Result<Self> {
        let mut exact_rows: Vec<Vec<BigRational>> = Vec::new();
        let mut float_rows: Vec<Vec<f64>> = Vec::new();
        let mut all_exact = true;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut erow = Vec::new();
            let mut frow = Vec::new();
            for tok in line.split_whitespace() {
                match parse_rational(tok) {
                    Some(r) => {
                        frow.push(r.to_f64().unwrap_or(f64::NAN));
                        erow.push(r);
                    }
                    None => {
                        let v: f64 = tok.parse().map_err(|_| {
                            Error::InvalidGraph(format!("cannot parse weight `{tok}`"))
                        })?;
                        all_exact = false;
                        frow.push(v);
                    }
                }
            }
            exact_rows.push(erow);
            float_rows.push(frow);
        }
        if all_exact {
            // rational input: tolerate float-level asymmetry the same way
            let n = check_square(exact_rows.iter().map(Vec::len), exact_rows.len())?;
            let flat: Vec<f64> = float_rows.into_iter().flatten().collect();
            check_symmetric(n, &flat)?;
            let exact: Vec<BigRational> = exact_rows.into_iter().flatten().collect();
            Ok(Self::symmetrized(n, Family::General, flat, Some(exact)))
        } else {
            let n = check_square(float_rows.iter().map(Vec::len), float_rows.len())?;
            let flat: Vec<f64> = float_rows.into_iter().flatten().collect();
            check_symmetric(n, &flat)?;
            Ok(Self::symmetrized(n, Family::General, flat, None))
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_matrix(&text)
    }

    fn empty(n: usize, family: Family) -> Self {
        Graph {
            n,
            family,
            weights: vec![0.0; n * n],
            exact: Some(vec![BigRational::zero(); n * n]),
        }
    }

    fn set_unit_edge(&mut self, i: usize, j: usize) {
        let n = self.n;
        self.weights[i * n + j] = 1.0;
        self.weights[j * n + i] = 1.0;
        if let Some(exact) = self.exact.as_mut() {
            exact[i * n + j] = BigRational::from_integer(1.into());
            exact[j * n + i] = BigRational::from_integer(1.into());
        }
    }

    fn symmetrized(
        n: usize,
        family: Family,
        mut weights: Vec<f64>,
        mut exact: Option<Vec<BigRational>>,
    ) -> Self {
        for i in 0..n {
            for j in (i + 1)..n {
                weights[j * n + i] = weights[i * n + j];
                if let Some(e) = exact.as_mut() {
                    e[j * n + i] = e[i * n + j].clone();
                }
            }
        }
        Graph { n, family, weights, exact }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Weight between internal indices `i` and `j` (both `0..n`).
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    /// Row-major float adjacency matrix.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.weights.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Row-major exact adjacency matrix, when every weight was rational.
    pub fn exact_weights(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Row-major integer adjacency matrix, or the first non-integer entry.
    pub fn integer_weights(&self) -> Result<Vec<BigInt>> {
        let n = self.n;
        match &self.exact {
            Some(exact) => exact
                .iter()
                .enumerate()
                .map(|(idx, w)| {
                    if w.is_integer() {
                        Ok(w.to_integer())
                    } else {
                        Err(Error::NonIntegerWeight {
                            row: idx / n,
                            col: idx % n,
                            value: w.to_string(),
                        })
                    }
                })
                .collect(),
            None => {
                let (idx, w) = self
                    .weights
                    .iter()
                    .enumerate()
                    .find(|(_, w)| w.fract() != 0.0)
                    .or_else(|| self.weights.first().map(|w| (0, w)))
                    .expect("graph has at least one entry");
                Err(Error::NonIntegerWeight {
                    row: idx / n,
                    col: idx % n,
                    value: w.to_string(),
                })
            }
        }
    }

    /// Edge list `(i, j, w)` over internal indices with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let w = self.weight(i, j);
                if w != 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n)
            .map(|i| (0..self.n).filter(|&j| self.weight(i, j) != 0.0).count())
            .collect()
    }

    /// Converts a user-facing vertex label into an internal index.
    pub fn index_of(&self, label: i64) -> Result<usize> {
        let idx = label - self.family.first_label();
        if idx < 0 || idx as usize >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: label,
                n: self.n,
                convention: self.family.convention(),
            });
        }
        Ok(idx as usize)
    }

    pub fn label_of(&self, index: usize) -> i64 {
        index as i64 + self.family.first_label()
    }

    pub fn is_bipartite(&self) -> bool {
        let mut colour = vec![None::<bool>; self.n];
        for start in 0..self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                let cx = colour[x].unwrap();
                for y in 0..self.n {
                    if self.weight(x, y) == 0.0 {
                        continue;
                    }
                    match colour[y] {
                        None => {
                            colour[y] = Some(!cx);
                            stack.push(y);
                        }
                        Some(cy) if cy == cx => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Unweighted shortest-path distances from `source` (`None` if unreachable).
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for y in 0..self.n {
                if self.weight(x, y) != 0.0 && dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("family", &self.family)
            .field("exact", &self.exact.is_some())
            .field("edges", &self.edges().len())
            .finish()
    }
}

fn check_square(row_lens: impl Iterator<Item = usize>, rows: usize) -> Result<usize> {
    if rows == 0 {
        return Err(Error::InvalidGraph("empty matrix".into()));
    }
    for (i, len) in row_lens.enumerate() {
        if len != rows {
            return Err(Error::InvalidGraph(format!(
                "matrix is not square: row {i} has {len} entries, expected {rows}"
            )));
        }
    }
    Ok(rows)
}

fn check_symmetric(n: usize, flat: &[f64]) -> Result<()> {
    let mut worst = (0.0f64, 0, 0);
    for i in 0..n {
        for j in (i + 1)..n {
            let dev = (flat[i * n + j] - flat[j * n + i]).abs();
            if dev > worst.0 {
                worst = (dev, i, j);
            }
        }
    }
    if worst.0 > SYMMETRY_TOLERANCE {
        return Err(Error::Asymmetric { max_deviation: worst.0, row: worst.1, col: worst.2 });
    }
    Ok(())
}

/// Reads `a`, `p/q`, or a plain decimal such as `-1.25` exactly.
fn parse_rational(tok: &str) -> Option<BigRational> {
    if let Some((num, den)) = tok.split_once('/') {
        let num: BigInt = num.parse().ok()?;
        let den: BigInt = den.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Ok(int) = tok.parse::<BigInt>() {
        return Some(BigRational::from_integer(int));
    }
    let (neg, body) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok.strip_prefix('+').unwrap_or(tok)),
    };
    let (whole, frac) = body.split_once('.')?;
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{whole}{frac}").parse().ok()?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, scale);
    Some(if neg { -r } else { r })
}

/// Graph selector used on the command line: `path:N`, `cycle:N`, `file:PATH`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    Path(usize),
    Cycle(usize),
    File(String),
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSpec::Path(n) => Graph::path(*n),
            GraphSpec::Cycle(n) => Graph::cycle(*n),
            GraphSpec::File(p) => Graph::from_file(p),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s.split_once(':').ok_or_else(|| Error::GraphSpec(s.into()))?;
        match kind {
            "path" => arg.parse().map(GraphSpec::Path).map_err(|_| Error::GraphSpec(s.into())),
            "cycle" => arg.parse().map(GraphSpec::Cycle).map_err(|_| Error::GraphSpec(s.into())),
            "file" if !arg.is_empty() => Ok(GraphSpec::File(arg.into())),
            _ => Err(Error::GraphSpec(s.into())),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Path(n) => write!(f, "path:{n}"),
            GraphSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSpec::File(p) => write!(f, "file:{p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_set(g: &Graph) -> Vec<(i64, i64)> {
        g.edges().iter().map(|&(i, j, _)| (g.label_of(i), g.label_of(j))).collect()
    }

    #[test]
    fn small_paths() {
        assert_eq!(edge_set(&Graph::path(2).unwrap()), vec![(1, 2)]);
        assert_eq!(edge_set(&Graph::path(4).unwrap()), vec![(1, 2), (2, 3), (3, 4)]);
        let p9 = Graph::path(9).unwrap();
        assert_eq!(p9.edges().len(), 8);
        assert_eq!(p9.degrees(), vec![1, 2, 2, 2, 2, 2, 2, 2, 1]);
        assert_eq!(Graph::path(1).unwrap().edges().len(), 0);
        assert!(Graph::path(0).is_err());
    }

    #[test]
    fn small_cycles() {
        let c3 = Graph::cycle(3).unwrap();
        assert_eq!(edge_set(&c3), vec![(0, 1), (0, 2), (1, 2)]);
        let c6 = Graph::cycle(6).unwrap();
        assert_eq!(c6.edges().len(), 6);
        assert!(c6.degrees().iter().all(|&d| d == 2));
        let c4 = Graph::cycle(4).unwrap();
        for row in c4.rows() {
            assert_eq!(row.iter().sum::<f64>(), 2.0);
        }
        assert!(Graph::cycle(2).is_err());
    }

    #[test]
    fn from_weights_accepts_and_rejects() {
        let g = Graph::from_weights(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(g.weights(), Graph::path(2).unwrap().weights());
        let g = Graph::from_weights(&[vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(g.weight(0, 1), 2.0);
        match Graph::from_weights(&[vec![0.0, 1.0], vec![0.0, 0.0]]) {
            Err(Error::Asymmetric { max_deviation, .. }) => assert_eq!(max_deviation, 1.0),
            other => panic!("expected asymmetry error, got {other:?}"),
        }
        assert!(Graph::from_weights(&[vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn near_symmetric_is_stored_exactly_symmetric() {
        let g = Graph::from_weights(&[vec![0.0, 1.0], vec![1.0 + 1e-14, 0.0]]).unwrap();
        assert_eq!(g.weight(0, 1), g.weight(1, 0));
        let e = g.exact_weights().unwrap();
        assert_eq!(e[1], e[2]);
    }

    #[test]
    fn builders_round_trip_through_from_weights() {
        for n in 1..12 {
            let p = Graph::path(n).unwrap();
            let q = Graph::from_weights(&p.rows()).unwrap();
            assert_eq!(p.weights(), q.weights());
            assert_eq!(p.exact_weights(), q.exact_weights());
        }
        for n in 3..12 {
            let c = Graph::cycle(n).unwrap();
            let q = Graph::from_weights(&c.rows()).unwrap();
            assert_eq!(c.weights(), q.weights());
        }
    }

    #[test]
    fn matrix_text_parsing() {
        let g = Graph::parse_matrix("# triangle\n0 1 1\n1 0 1\n\n1 1 0\n").unwrap();
        assert_eq!(g.n(), 3);
        assert!(g.integer_weights().is_ok());
        let g = Graph::parse_matrix("0 1/2\n0.5 0\n").unwrap();
        assert!(g.is_exact());
        assert!(matches!(g.integer_weights(), Err(Error::NonIntegerWeight { .. })));
        let g = Graph::parse_matrix("0 1e0\n1 0\n").unwrap();
        assert!(!g.is_exact());
        assert!(Graph::parse_matrix("0 1\n0 0\n").is_err());
        assert!(Graph::parse_matrix("0 x\n1 0\n").is_err());
    }

    #[test]
    fn labels() {
        let p = Graph::path(5).unwrap();
        assert_eq!(p.index_of(1).unwrap(), 0);
        assert!(p.index_of(0).is_err());
        assert!(p.index_of(6).is_err());
        let c = Graph::cycle(5).unwrap();
        assert_eq!(c.index_of(0).unwrap(), 0);
        assert!(c.index_of(5).is_err());
        assert_eq!(c.label_of(4), 4);
    }

    #[test]
    fn spec_strings() {
        assert_eq!("path:9".parse::<GraphSpec>().unwrap(), GraphSpec::Path(9));
        assert_eq!("cycle:6".parse::<GraphSpec>().unwrap(), GraphSpec::Cycle(6));
        assert_eq!(
            "file:/tmp/a.txt".parse::<GraphSpec>().unwrap(),
            GraphSpec::File("/tmp/a.txt".into())
        );
        assert!("star:4".parse::<GraphSpec>().is_err());
        assert!("path:x".parse::<GraphSpec>().is_err());
        assert_eq!(GraphSpec::Cycle(8).to_string(), "cycle:8");
    }

    #[test]
    fn bipartite_and_distances() {
        assert!(Graph::path(7).unwrap().is_bipartite());
        assert!(Graph::cycle(6).unwrap().is_bipartite());
        assert!(!Graph::cycle(5).unwrap().is_bipartite());
        let d = Graph::path(4).unwrap().distances_from(0);
        assert_eq!(d, vec![Some(0), Some(1), Some(2), Some(3)]);
    }
}
