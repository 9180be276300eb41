//! Enumeration of equivalence classes at small `n`, the class implication
//! graph, and exact implication counts over uniformly sampled prefix pairs.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use itertools::Itertools;
use num_rational::Ratio;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::decider::implies;
use crate::packed::{Packed, PACK_LIMIT};
use crate::prefix::{generated_names, CanonicalClass, Prefix, Quantifier};
use crate::InstanceTooLarge;

/// Cap for class enumeration and graph construction.
pub const CLASS_CAP: usize = 7;
/// Cap for pair counting.
pub const PAIR_CAP: usize = 5;

fn check(n: usize, cap: usize) -> Result<(), InstanceTooLarge> {
    let cap = cap.min(PACK_LIMIT);
    if n == 0 || n > cap {
        Err(InstanceTooLarge { n, cap })
    } else {
        Ok(())
    }
}

/// Number of raw prefixes over `n` variables: `n! * 2^n`.
pub fn raw_prefix_count(n: usize) -> u64 {
    (1..=n as u64).product::<u64>() << n
}

fn raw_prefixes(n: usize) -> impl Iterator<Item = Packed> {
    let perms: Vec<Vec<u32>> = (0..n as u32).permutations(n).collect();
    perms.into_iter().flat_map(move |sigma| {
        (0u32..1 << n).map(move |mask| {
            let quants: Vec<Quantifier> = (0..n).map(|i| Quantifier::from_bit(mask >> i & 1 == 1)).collect();
            Packed::from_parts(&sigma, &quants)
        })
    })
}

/// Classes over `x1..xn` keyed by packed representative, sorted by text.
struct ClassTable {
    classes: Vec<(CanonicalClass, u64)>,
    index: FxHashMap<Packed, usize>,
}

impl ClassTable {
    fn build(n: usize) -> Self {
        let mut counts: FxHashMap<Packed, u64> = FxHashMap::default();
        for state in raw_prefixes(n) {
            *counts.entry(state.canonical(n)).or_default() += 1;
        }
        let names = generated_names(n);
        let mut keyed: Vec<(CanonicalClass, u64, Packed)> = counts
            .into_iter()
            .map(|(key, count)| {
                let (sigma, quants) = key.unpack(n);
                let prefix = Prefix::new(sigma, quants, names.clone()).expect("valid packed prefix");
                (prefix.canonicalize(), count, key)
            })
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let index = keyed.iter().enumerate().map(|(i, (_, _, key))| (*key, i)).collect();
        let classes = keyed.into_iter().map(|(class, count, _)| (class, count)).collect();
        ClassTable { classes, index }
    }
}

/// Every class over `x1..xn` with the number of raw prefixes it contains,
/// sorted by canonical text.
pub fn enumerate_classes(n: usize) -> Result<Vec<(CanonicalClass, u64)>, InstanceTooLarge> {
    enumerate_classes_capped(n, CLASS_CAP)
}

pub fn enumerate_classes_capped(n: usize, cap: usize) -> Result<Vec<(CanonicalClass, u64)>, InstanceTooLarge> {
    check(n, cap)?;
    Ok(ClassTable::build(n).classes)
}

/// Directed graph on classes; `(u, v)` means some member of `u` reaches a
/// member of `v` by one quantifier-changing move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicationGraph {
    pub n: usize,
    pub vertices: Vec<CanonicalClass>,
    pub multiplicity: Vec<u64>,
    /// Sorted, no self-loops.
    pub edges: Vec<(usize, usize)>,
}

pub fn build_graph(n: usize) -> Result<ImplicationGraph, InstanceTooLarge> {
    build_graph_capped(n, CLASS_CAP)
}

pub fn build_graph_capped(n: usize, cap: usize) -> Result<ImplicationGraph, InstanceTooLarge> {
    check(n, cap)?;
    let table = ClassTable::build(n);
    let mut edges = BTreeSet::new();
    for state in raw_prefixes(n) {
        let from = table.index[&state.canonical(n)];
        state.for_each_strict_successor(n, |next| {
            edges.insert((from, table.index[&next.canonical(n)]));
        });
    }
    let (vertices, multiplicity) = table.classes.into_iter().unzip();
    Ok(ImplicationGraph {
        n,
        vertices,
        multiplicity,
        edges: edges.into_iter().collect(),
    })
}

impl ImplicationGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_of(&self, class: &CanonicalClass) -> Option<usize> {
        self.vertices.binary_search(class).ok()
    }

    fn adjacency(&self, transpose: bool) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(u, v) in &self.edges {
            if transpose {
                adj[v].push(u);
            } else {
                adj[u].push(v);
            }
        }
        adj
    }

    fn reach(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
        let mut seen = vec![false; adj.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Vertices reachable from `u`, `u` included.
    pub fn descendants(&self, u: usize) -> Vec<usize> {
        let seen = Self::reach(&self.adjacency(false), u);
        (0..seen.len()).filter(|&v| seen[v]).collect()
    }

    /// Vertices that reach `u`, `u` included.
    pub fn ancestors(&self, u: usize) -> Vec<usize> {
        let seen = Self::reach(&self.adjacency(true), u);
        (0..seen.len()).filter(|&v| seen[v]).collect()
    }

    /// A topological order, or `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let adj = self.adjacency(false);
        let mut indegree = vec![0usize; adj.len()];
        for &(_, v) in &self.edges {
            indegree[v] += 1;
        }
        let mut queue: VecDeque<usize> = (0..adj.len()).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(adj.len());
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &adj[u] {
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        (order.len() == adj.len()).then_some(order)
    }

    /// Ordered raw pairs `(s1, s2)` with `s1 => s2`, counted through class
    /// reachability weighted by multiplicities.
    pub fn true_pairs_by_reachability(&self) -> u64 {
        let adj = self.adjacency(false);
        (0..self.vertices.len())
            .map(|u| {
                let seen = Self::reach(&adj, u);
                let reached: u64 = (0..seen.len()).filter(|&v| seen[v]).map(|v| self.multiplicity[v]).sum();
                self.multiplicity[u] * reached
            })
            .sum()
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph implications_n{} {{\n", self.n);
        for (id, class) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  {id} [label=\"{class}\"];");
        }
        for (u, v) in &self.edges {
            let _ = writeln!(out, "  {u} -> {v};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Vertex {
            id: usize,
            prefix: String,
            multiplicity: u64,
        }
        #[derive(Serialize)]
        struct Graph {
            n: usize,
            vertices: Vec<Vertex>,
            edges: Vec<[usize; 2]>,
        }
        let graph = Graph {
            n: self.n,
            vertices: self
                .vertices
                .iter()
                .zip(&self.multiplicity)
                .enumerate()
                .map(|(id, (class, &multiplicity))| Vertex {
                    id,
                    prefix: class.to_string(),
                    multiplicity,
                })
                .collect(),
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        };
        let mut text = serde_json::to_string(&graph).expect("graph serializes");
        text.push('\n');
        text
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Json,
}

pub fn export_graph(g: &ImplicationGraph, format: GraphFormat) -> Vec<u8> {
    match format {
        GraphFormat::Dot => g.to_dot().into_bytes(),
        GraphFormat::Json => g.to_json().into_bytes(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub n: usize,
    pub class_count: usize,
    pub edge_count: usize,
    pub true_pairs: u64,
    pub total_pairs: u64,
    /// `true_pairs / total_pairs`, reduced.
    pub probability: Ratio<u64>,
}

impl CensusReport {
    pub fn to_json(&self) -> String {
        let value = serde_json::json!({
            "n": self.n,
            "class_count": self.class_count,
            "edge_count": self.edge_count,
            "true_pairs": self.true_pairs,
            "total_pairs": self.total_pairs,
            "probability": {
                "numerator": self.probability.numer(),
                "denominator": self.probability.denom(),
            },
        });
        let mut text = value.to_string();
        text.push('\n');
        text
    }

    pub fn to_text(&self) -> String {
        format!(
            "n {}\nclass_count {}\nedge_count {}\ntrue_pairs {}/{}\nprobability {}\n",
            self.n, self.class_count, self.edge_count, self.true_pairs, self.total_pairs, self.probability
        )
    }
}

/// Ordered raw pairs `(s1, s2)` with `s1 => s2`, from a decider sweep over
/// class pairs weighted by multiplicities.
pub fn true_pairs_by_decider(classes: &[(CanonicalClass, u64)]) -> u64 {
    let mut total = 0;
    for (a, ma) in classes {
        for (b, mb) in classes {
            if implies(a.rep(), b.rep()).expect("classes share variables").is_accepted() {
                total += ma * mb;
            }
        }
    }
    total
}

pub fn count_pairs(n: usize) -> Result<CensusReport, InstanceTooLarge> {
    count_pairs_capped(n, PAIR_CAP)
}

pub fn count_pairs_capped(n: usize, cap: usize) -> Result<CensusReport, InstanceTooLarge> {
    check(n, cap)?;
    let graph = build_graph_capped(n, CLASS_CAP.max(cap))?;
    let classes: Vec<(CanonicalClass, u64)> =
        graph.vertices.iter().cloned().zip(graph.multiplicity.iter().copied()).collect();
    let true_pairs = true_pairs_by_decider(&classes);
    let total_pairs = raw_prefix_count(n).pow(2);
    Ok(CensusReport {
        n,
        class_count: graph.vertices.len(),
        edge_count: graph.edge_count(),
        true_pairs,
        total_pairs,
        probability: Ratio::new(true_pairs, total_pairs),
    })
}
