//! Brute-force order theory on plain boolean matrices, written without the
//! library so it can serve as an oracle for it.
#![allow(dead_code)]

use std::sync::Arc;

use entropy_adjoint::{FiniteOrder, Space};
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    pub n: usize,
    pub le: Vec<Vec<bool>>,
}

impl Poset {
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    pub fn is_valid(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| self.le[i][i])
            && (0..n).all(|i| (0..n).all(|j| i == j || !(self.le[i][j] && self.le[j][i])))
            && (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(self.le[i][j] && self.le[j][k]) || self.le[i][k])))
    }

    pub fn space(&self) -> Arc<Space> {
        let labels = (0..self.n).map(|i| format!("p{i}")).collect();
        Arc::new(FiniteOrder::from_relation(labels, &self.le).expect("oracle poset is valid").into())
    }

    fn code_under(&self, perm: &[usize]) -> u32 {
        let mut code = 0u32;
        for i in 0..self.n {
            for j in 0..self.n {
                code = (code << 1) | u32::from(self.le[perm[i]][perm[j]]);
            }
        }
        code
    }

    fn canonical_code(&self) -> u32 {
        permutations(self.n).iter().map(|p| self.code_under(p)).min().unwrap_or(0)
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every poset on `1..=max_n` elements, one per isomorphism class.
pub fn all_posets(max_n: usize) -> Vec<Poset> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let off: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        let mut seen = std::collections::HashSet::new();
        for mask in 0u32..(1 << off.len()) {
            let mut le = vec![vec![false; n]; n];
            for (i, row) in le.iter_mut().enumerate() {
                row[i] = true;
            }
            for (b, &(i, j)) in off.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    le[i][j] = true;
                }
            }
            let p = Poset { n, le };
            if p.is_valid() && seen.insert(p.canonical_code()) {
                out.push(p);
            }
        }
    }
    out
}

/// A random poset: a random relation, kept acyclic by a hidden linear
/// extension, then closed.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize) -> Poset {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let density: f64 = rng.gen_range(0.1..0.8);
    let mut le = vec![vec![false; n]; n];
    for i in 0..n {
        le[i][i] = true;
        for j in i + 1..n {
            if rng.gen_bool(density) {
                le[order[i]][order[j]] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    Poset { n, le }
}

pub fn is_monotone(p: &Poset, q: &Poset, f: &[usize]) -> bool {
    (0..p.n).all(|a| (0..p.n).all(|b| !p.leq(a, b) || q.leq(f[a], f[b])))
}

/// All maps `p → q` in lexicographic order.
pub fn all_maps(p: &Poset, q: &Poset) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut f = vec![0; p.n];
    loop {
        out.push(f.clone());
        let mut i = 0;
        loop {
            if i == p.n {
                return out;
            }
            f[i] += 1;
            if f[i] < q.n {
                break;
            }
            f[i] = 0;
            i += 1;
        }
    }
}

pub fn monotone_maps(p: &Poset, q: &Poset) -> Vec<Vec<usize>> {
    all_maps(p, q).into_iter().filter(|f| is_monotone(p, q, f)).collect()
}

/// `f(c) ≤ d ⟺ c ≤ g(d)` for all `c`, `d`.
pub fn is_galois(p: &Poset, q: &Poset, f: &[usize], g: &[usize]) -> bool {
    (0..p.n).all(|c| (0..q.n).all(|d| q.leq(f[c], d) == p.leq(c, g[d])))
}

/// Every monotone `g` with `f ⊣ g`, by exhaustive search.
pub fn right_partners(p: &Poset, q: &Poset, f: &[usize]) -> Vec<Vec<usize>> {
    monotone_maps(q, p).into_iter().filter(|g| is_galois(p, q, f, g)).collect()
}

/// Every monotone `f` with `f ⊣ g`.
pub fn left_partners(p: &Poset, q: &Poset, g: &[usize]) -> Vec<Vec<usize>> {
    monotone_maps(p, q).into_iter().filter(|f| is_galois(p, q, f, g)).collect()
}

pub fn compose(first: &[usize], then: &[usize]) -> Vec<usize> {
    first.iter().map(|&i| then[i]).collect()
}

pub fn is_identity(f: &[usize]) -> bool {
    f.iter().enumerate().all(|(i, &j)| i == j)
}

pub fn injective(f: &[usize]) -> bool {
    let mut seen = std::collections::HashSet::new();
    f.iter().all(|x| seen.insert(*x))
}

pub fn surjective(f: &[usize], target_n: usize) -> bool {
    (0..target_n).all(|y| f.contains(&y))
}

/// Labels `p0`, `p1`, … as used by [`Poset::space`].
pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

#[test]
fn poset_counts_match_known_sequence() {
    let counts: Vec<usize> = (1..=4).map(|n| all_posets(n).iter().filter(|p| p.n == n).count()).collect();
    assert_eq!(counts, vec![1, 2, 5, 16]);
}
