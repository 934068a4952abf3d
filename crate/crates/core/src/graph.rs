//! Simple undirected graphs on `{0, .., n-1}`.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::permgroup::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    // Each edge stored once as (min, max).
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self { n, edges: BTreeSet::new() }
    }

    /// Builds a graph from 0-based edges, rejecting loops and bad endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("n >= 3")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn complete(n: usize) -> Self {
        Self::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).expect("valid")
    }

    /// Erdős–Rényi graph with edge probability `p`.
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    g.edges.insert((i, j));
                }
            }
        }
        g
    }

    /// Every labelled graph on `n` vertices, in edge-mask order.
    pub fn all_graphs(n: usize) -> Vec<Graph> {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        (0..1u64 << pairs.len())
            .map(|mask| Graph {
                n,
                edges: pairs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, &e)| e)
                    .collect(),
            })
            .collect()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::BadIndex { index: u.max(v), len: self.n });
        }
        if u == v {
            return Err(Error::InvalidInstance(format!("self-loop at vertex {}", u + 1)));
        }
        self.edges.insert((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&w| w != v && self.has_edge(v, w)).collect()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.sort_unstable();
        deg
    }

    /// `σ(G)` under the string action on adjacency matrices:
    /// `σ(G)_{ij} = G_{σ(i)σ(j)}`. Equivalently `{u, v}` becomes
    /// `{σ⁻¹(u), σ⁻¹(v)}`. With this convention `P_σ|G⟩ = |σ(G)⟩`.
    pub fn permuted(&self, sigma: &Permutation) -> Result<Graph> {
        if sigma.degree() != self.n {
            return Err(Error::DegreeMismatch { expected: self.n, found: sigma.degree() });
        }
        let inv = sigma.inverse();
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (inv.apply(u), inv.apply(v))))
    }
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawGraph { n: self.n, edges: self.edges.iter().map(|&(u, v)| [u + 1, v + 1]).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawGraph::deserialize(deserializer)?;
        let mut edges = Vec::with_capacity(raw.edges.len());
        for [u, v] in raw.edges {
            if u == 0 || v == 0 {
                return Err(D::Error::custom("vertices are 1-based"));
            }
            edges.push((u - 1, v - 1));
        }
        Graph::new(raw.n, edges).map_err(D::Error::custom)
    }
}
