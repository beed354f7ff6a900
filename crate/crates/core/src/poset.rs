//! Finite preorders, their adiabat quotients and Hasse diagrams, plus the
//! two numeric lines (nonnegative rationals and naturals) checked on grids.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Default bound on the number of ordered pairs a finite relation may hold.
pub const MAX_RELATION_PAIRS: usize = 10_000;

/// A finite set with a reflexive, transitive relation.
///
/// Antisymmetry is recorded, not required: entropy-induced orders are total
/// preorders and only become posets after [`FiniteOrder::quotient_adiabats`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteOrder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    // row-major n*n, rel[i*n+j] = i ≼ j
    rel: Vec<bool>,
    is_poset: bool,
}

impl FiniteOrder {
    /// Builds the reflexive-transitive closure of `declared` over `elements`.
    pub fn build<S: AsRef<str>>(elements: &[S], declared: &[(S, S)]) -> Result<Self> {
        Self::build_with_cap(elements, declared, MAX_RELATION_PAIRS)
    }

    pub fn build_with_cap<S: AsRef<str>>(
        elements: &[S],
        declared: &[(S, S)],
        cap: usize,
    ) -> Result<Self> {
        let labels: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        let index = index_labels(&labels)?;
        let n = labels.len();
        let mut pairs = Vec::with_capacity(declared.len());
        for (a, b) in declared {
            let i = *index
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownElement(a.as_ref().to_string()))?;
            let j = *index
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownElement(b.as_ref().to_string()))?;
            pairs.push((i, j));
        }
        check_cap(n, cap)?;
        let mut rel = vec![false; n * n];
        for (i, j) in pairs {
            rel[i * n + j] = true;
        }
        Ok(Self::close(labels, index, rel))
    }

    /// Builds from an index-based relation table (`rel[i][j]` = i ≼ j), closing it.
    pub fn from_relation(labels: Vec<String>, rel: &[Vec<bool>]) -> Result<Self> {
        let index = index_labels(&labels)?;
        let n = labels.len();
        check_cap(n, MAX_RELATION_PAIRS)?;
        if rel.len() != n || rel.iter().any(|row| row.len() != n) {
            return Err(Error::ShapeMismatch(format!("relation table is not {n}x{n}")));
        }
        let flat = rel.iter().flatten().copied().collect();
        Ok(Self::close(labels, index, flat))
    }

    /// The chain `0 < 1 < … < n-1` with labels `"0"`, `"1"`, ….
    pub fn chain(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let rel: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        Self::from_relation(labels, &rel).expect("chain is well formed")
    }

    /// The discrete order on the given labels.
    pub fn discrete<S: AsRef<str>>(elements: &[S]) -> Result<Self> {
        Self::build(elements, &[])
    }

    fn close(labels: Vec<String>, index: HashMap<String, usize>, mut rel: Vec<bool>) -> Self {
        let n = labels.len();
        for i in 0..n {
            rel[i * n + i] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if rel[i * n + k] {
                    for j in 0..n {
                        if rel[k * n + j] {
                            rel[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let is_poset = (0..n).all(|i| (0..n).all(|j| i == j || !(rel[i * n + j] && rel[j * n + i])));
        FiniteOrder { labels, index, rel, is_poset }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn is_poset(&self) -> bool {
        self.is_poset
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    /// `x ≼ y` by label.
    pub fn leq(&self, x: &str, y: &str) -> Result<bool> {
        Ok(self.leq_idx(self.index_of(x)?, self.index_of(y)?))
    }

    #[inline]
    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.rel[i * self.labels.len() + j]
    }

    /// Mutual relation (same adiabat).
    pub fn equiv_idx(&self, i: usize, j: usize) -> bool {
        self.leq_idx(i, j) && self.leq_idx(j, i)
    }

    /// Number of related pairs, reflexive ones included.
    pub fn relation_size(&self) -> usize {
        self.rel.iter().filter(|&&b| b).count()
    }

    /// Merges mutually related elements. Returns the quotient poset and the
    /// class of every original element. Classes are numbered by first
    /// occurrence; a class label joins its members with `~`.
    pub fn quotient_adiabats(&self) -> (FiniteOrder, Vec<usize>) {
        let n = self.len();
        let mut class_of = vec![usize::MAX; n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = members.len();
            let group: Vec<usize> = (i..n).filter(|&j| self.equiv_idx(i, j)).collect();
            for &j in &group {
                class_of[j] = c;
            }
            members.push(group);
        }
        let labels: Vec<String> = members
            .iter()
            .map(|g| g.iter().map(|&i| self.labels[i].as_str()).collect::<Vec<_>>().join("~"))
            .collect();
        let rel: Vec<Vec<bool>> = members
            .iter()
            .map(|a| members.iter().map(|b| self.leq_idx(a[0], b[0])).collect())
            .collect();
        let quotient = FiniteOrder::from_relation(labels, &rel).expect("quotient is well formed");
        (quotient, class_of)
    }

    /// Covering pairs of a poset.
    pub fn hasse_edges(&self) -> Result<HasseDiagram> {
        if !self.is_poset {
            let n = self.len();
            let (i, j) = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .find(|&(i, j)| i != j && self.equiv_idx(i, j))
                .expect("non-poset has a mutual pair");
            return Err(Error::NotAntisymmetric(format!(
                "{} and {} are mutually related",
                self.labels[i], self.labels[j]
            )));
        }
        let n = self.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.leq_idx(i, j) {
                    continue;
                }
                let covered = (0..n).all(|k| k == i || k == j || !(self.leq_idx(i, k) && self.leq_idx(k, j)));
                if covered {
                    edges.push((i, j));
                }
            }
        }
        Ok(HasseDiagram { labels: self.labels.clone(), edges })
    }

    /// Componentwise order on the cartesian product; labels are `(a,b)`.
    pub fn product(&self, other: &FiniteOrder) -> Result<FiniteOrder> {
        self.product_with_cap(other, MAX_RELATION_PAIRS)
    }

    pub fn product_with_cap(&self, other: &FiniteOrder, cap: usize) -> Result<FiniteOrder> {
        let n = self
            .len()
            .checked_mul(other.len())
            .ok_or(Error::SizeCap { pairs: usize::MAX, cap })?;
        check_cap(n, cap)?;
        let pairs: Vec<(usize, usize)> = (0..self.len())
            .flat_map(|i| (0..other.len()).map(move |j| (i, j)))
            .collect();
        let labels = pairs
            .iter()
            .map(|&(i, j)| format!("({},{})", self.labels[i], other.labels[j]))
            .collect();
        let rel: Vec<Vec<bool>> = pairs
            .iter()
            .map(|&(a, b)| {
                pairs
                    .iter()
                    .map(|&(c, d)| self.leq_idx(a, c) && other.leq_idx(b, d))
                    .collect()
            })
            .collect();
        FiniteOrder::from_relation(labels, &rel)
    }
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>> {
    if labels.is_empty() {
        return Err(Error::Invalid("an order needs at least one element".into()));
    }
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateState(l.clone()));
        }
    }
    Ok(index)
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    let pairs = n.saturating_mul(n);
    if pairs > cap {
        return Err(Error::SizeCap { pairs, cap });
    }
    Ok(())
}

/// Covering relation of a finite poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseDiagram {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl HasseDiagram {
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labeled_edges(&self) -> Vec<(&str, &str)> {
        let mut out: Vec<(&str, &str)> = self
            .edges
            .iter()
            .map(|&(a, b)| (self.labels[a].as_str(), self.labels[b].as_str()))
            .collect();
        out.sort();
        out
    }

    /// Reflexive-transitive closure of the edges, as an order.
    pub fn closure(&self) -> FiniteOrder {
        let pairs: Vec<(&str, &str)> = self.labeled_edges();
        let labels: Vec<&str> = self.labels.iter().map(String::as_str).collect();
        FiniteOrder::build(&labels, &pairs).expect("edges reference known labels")
    }

    /// DOT digraph, one `a -> b;` line per covering edge in lexicographic order.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph hasse {\n");
        let mut isolated: Vec<&str> = self
            .labels
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.edges.iter().any(|&(a, b)| a == *i || b == *i))
            .map(|(_, l)| l.as_str())
            .collect();
        isolated.sort();
        for l in isolated {
            let _ = writeln!(out, "  {};", dot_id(l));
        }
        for (a, b) in self.labeled_edges() {
            let _ = writeln!(out, "  {} -> {};", dot_id(a), dot_id(b));
        }
        out.push_str("}\n");
        out
    }
}

fn dot_id(label: &str) -> String {
    let plain = !label.is_empty()
        && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !label.starts_with(|c: char| c.is_ascii_digit())
        || (!label.is_empty() && label.chars().all(|c| c.is_ascii_digit()));
    if plain {
        label.to_string()
    } else {
        format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineKind {
    /// ℝ≥0, represented by the nonnegative rationals.
    Reals,
    /// ℕ≥0.
    Naturals,
}

impl LineKind {
    pub fn name(self) -> &'static str {
        match self {
            LineKind::Reals => "reals",
            LineKind::Naturals => "naturals",
        }
    }
}

/// Default number of unit intervals covered by a probe grid.
pub const DEFAULT_GRID_N: u32 = 30;

/// A numeric line with its probe-grid density.
///
/// The grid for a check is `{k/q : 0 ≤ k ≤ N·q}` where `q` is chosen by the
/// caller (the lcm of the denominators in the maps under test); on the
/// naturals `q` is always 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericLine {
    kind: LineKind,
    grid_n: u32,
}

impl NumericLine {
    pub fn new(kind: LineKind, grid_n: u32) -> Self {
        NumericLine { kind, grid_n }
    }

    pub fn reals() -> Self {
        Self::new(LineKind::Reals, DEFAULT_GRID_N)
    }

    pub fn naturals() -> Self {
        Self::new(LineKind::Naturals, DEFAULT_GRID_N)
    }

    pub fn kind(&self) -> LineKind {
        self.kind
    }

    pub fn grid_n(&self) -> u32 {
        self.grid_n
    }

    pub fn contains(&self, x: &Rational) -> bool {
        !x.is_negative() && (self.kind == LineKind::Reals || x.is_integer())
    }

    pub fn leq(&self, x: &Rational, y: &Rational) -> Result<bool> {
        for v in [x, y] {
            if !self.contains(v) {
                return Err(Error::OutsideCarrier(crate::rational::format(v)));
            }
        }
        Ok(x <= y)
    }

    /// Strictly increasing, nonnegative probe points.
    pub fn probe_grid(&self, denominator: &BigInt) -> Vec<Rational> {
        let q = match self.kind {
            LineKind::Naturals => BigInt::one(),
            LineKind::Reals if denominator.is_positive() => denominator.clone(),
            LineKind::Reals => BigInt::one(),
        };
        let top = BigInt::from(self.grid_n) * &q;
        let mut out = Vec::new();
        let mut k = BigInt::zero();
        while k <= top {
            out.push(Rational::new(k.clone(), q.clone()));
            k += 1;
        }
        out
    }
}
