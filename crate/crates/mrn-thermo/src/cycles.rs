//! Cycle structure of the state graph: a breadth-first spanning forest, its
//! chords, the fundamental cycles they close, and the decomposition of the
//! affinity of any cycle over the fundamental ones.

use std::collections::{HashMap, VecDeque};

use crate::graph::ThermoGraph;
use crate::ThermoError;

/// Step along an edge of a [`CycleGraph`]; `forward` follows the edge's
/// orientation (tail to head).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

impl Step {
    fn sign(&self) -> i64 {
        if self.forward {
            1
        } else {
            -1
        }
    }
}

/// Closed walk in the state graph starting and ending at `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub start: usize,
    pub steps: Vec<Step>,
}

/// Edge of the cycle graph: a two-sided edge of the underlying
/// [`ThermoGraph`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleEdge {
    /// Index into [`ThermoGraph::edges`].
    pub graph_edge: usize,
    pub pair: usize,
    pub tail: usize,
    pub head: usize,
    /// `ln[π_fwd(x_tail)/π_bwd(x_head)]`.
    pub log_ratio: f64,
}

/// Graph of states joined by transitions whose forward and reverse
/// propensities are both positive (parallel edges from different reaction
/// pairs are kept), with a spanning forest and fundamental cycles.
#[derive(Debug, Clone)]
pub struct CycleGraph {
    n_nodes: usize,
    edges: Vec<CycleEdge>,
    /// Tree edge towards the root of each node (`None` for roots).
    parent: Vec<Option<Step>>,
    depth: Vec<usize>,
    component: Vec<usize>,
    n_components: usize,
    tree: Vec<usize>,
    chords: Vec<usize>,
    fundamental: Vec<Cycle>,
    by_tail: HashMap<(usize, usize), usize>,
    by_head: HashMap<(usize, usize), usize>,
}

impl CycleGraph {
    /// Builds the cycle graph of `graph` with a BFS spanning forest.
    pub fn new(graph: &ThermoGraph) -> Self {
        let edges: Vec<CycleEdge> = graph
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_two_sided())
            .map(|(k, e)| CycleEdge {
                graph_edge: k,
                pair: e.pair,
                tail: e.tail,
                head: e.head,
                log_ratio: e.forward_rate.ln() - e.backward_rate.ln(),
            })
            .collect();
        Self::from_edges(graph.n_states(), edges)
    }

    /// Builds a cycle graph from explicit edges `(pair, tail, head, ln ratio)`.
    pub fn from_edges(n_nodes: usize, edges: Vec<CycleEdge>) -> Self {
        let mut adjacency: Vec<Vec<Step>> = vec![Vec::new(); n_nodes];
        let mut by_tail = HashMap::new();
        let mut by_head = HashMap::new();
        for (k, e) in edges.iter().enumerate() {
            adjacency[e.tail].push(Step { edge: k, forward: true });
            adjacency[e.head].push(Step { edge: k, forward: false });
            by_tail.insert((e.pair, e.tail), k);
            by_head.insert((e.pair, e.head), k);
        }
        let mut parent = vec![None; n_nodes];
        let mut depth = vec![0; n_nodes];
        let mut component = vec![usize::MAX; n_nodes];
        let mut in_tree = vec![false; edges.len()];
        let mut n_components = 0;
        for root in 0..n_nodes {
            if component[root] != usize::MAX {
                continue;
            }
            component[root] = n_components;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for step in &adjacency[u] {
                    let e = &edges[step.edge];
                    let v = if step.forward { e.head } else { e.tail };
                    if component[v] == usize::MAX {
                        component[v] = n_components;
                        depth[v] = depth[u] + 1;
                        // the parent step goes from v back to u
                        parent[v] = Some(Step { edge: step.edge, forward: !step.forward });
                        in_tree[step.edge] = true;
                        queue.push_back(v);
                    }
                }
            }
            n_components += 1;
        }
        let tree: Vec<usize> = (0..edges.len()).filter(|k| in_tree[*k]).collect();
        let chords: Vec<usize> = (0..edges.len()).filter(|k| !in_tree[*k]).collect();
        let mut g = CycleGraph {
            n_nodes,
            edges,
            parent,
            depth,
            component,
            n_components,
            tree,
            chords,
            fundamental: Vec::new(),
            by_tail,
            by_head,
        };
        g.fundamental = g.chords.iter().map(|&k| g.fundamental_cycle_of(k)).collect();
        g
    }

    /// Chord `k` traversed tail → head, closed by the tree path head → tail.
    fn fundamental_cycle_of(&self, k: usize) -> Cycle {
        let e = self.edges[k];
        let mut steps = vec![Step { edge: k, forward: true }];
        let (mut a, mut b) = (e.head, e.tail);
        // climb from both ends to the lowest common ancestor
        let mut down = Vec::new();
        while a != b {
            if self.depth[a] >= self.depth[b] {
                let s = self.parent[a].expect("non-root node has a parent");
                steps.push(s);
                a = self.endpoint(a, s);
            } else {
                let s = self.parent[b].expect("non-root node has a parent");
                down.push(Step { edge: s.edge, forward: !s.forward });
                b = self.endpoint(b, s);
            }
        }
        steps.extend(down.into_iter().rev());
        Cycle { start: e.tail, steps }
    }

    fn endpoint(&self, from: usize, s: Step) -> usize {
        let e = &self.edges[s.edge];
        debug_assert_eq!(from, if s.forward { e.tail } else { e.head });
        if s.forward {
            e.head
        } else {
            e.tail
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[CycleEdge] {
        &self.edges
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    /// Component index of each node.
    pub fn components(&self) -> &[usize] {
        &self.component
    }

    pub fn tree_edges(&self) -> &[usize] {
        &self.tree
    }

    pub fn chords(&self) -> &[usize] {
        &self.chords
    }

    /// Fundamental cycles, one per chord, in chord order.
    pub fn fundamental_cycles(&self) -> &[Cycle] {
        &self.fundamental
    }

    /// Tree step from `node` towards its root.
    pub fn parent_step(&self, node: usize) -> Option<Step> {
        self.parent[node]
    }

    /// Checks that `c` is a closed walk.
    pub fn validate(&self, c: &Cycle) -> Result<(), ThermoError> {
        if c.steps.is_empty() {
            return Err(ThermoError::InvalidCycle("empty cycle".into()));
        }
        let mut at = c.start;
        for (i, s) in c.steps.iter().enumerate() {
            let e = self
                .edges
                .get(s.edge)
                .ok_or_else(|| ThermoError::InvalidCycle(format!("step {i} uses unknown edge {}", s.edge)))?;
            let (from, to) = if s.forward { (e.tail, e.head) } else { (e.head, e.tail) };
            if from != at {
                return Err(ThermoError::InvalidCycle(format!("step {i} starts at node {from}, walk is at {at}")));
            }
            at = to;
        }
        if at != c.start {
            return Err(ThermoError::InvalidCycle(format!("walk ends at node {at}, not at {}", c.start)));
        }
        Ok(())
    }

    /// Net signed traversal count of every edge by `c`.
    pub fn orientation(&self, c: &Cycle) -> Vec<i64> {
        let mut o = vec![0; self.edges.len()];
        for s in &c.steps {
            o[s.edge] += s.sign();
        }
        o
    }

    /// Cycle affinity `A(C) = Σ ± ln(π_fwd/π_bwd) = ln P(C)`.
    pub fn affinity(&self, c: &Cycle) -> f64 {
        c.steps.iter().map(|s| s.sign() as f64 * self.edges[s.edge].log_ratio).sum()
    }

    /// Cycle product `P(C)` of propensity ratios.
    pub fn product(&self, c: &Cycle) -> f64 {
        self.affinity(c).exp()
    }

    /// Decomposition coefficients `α_k(C) = σ_{e_k}(C) σ_{e_k}(C†_k)` over
    /// the fundamental cycles.
    pub fn coefficients(&self, c: &Cycle) -> Vec<i64> {
        let o = self.orientation(c);
        self.chords
            .iter()
            .zip(&self.fundamental)
            .map(|(&k, f)| o[k] * self.orientation(f)[k])
            .collect()
    }

    /// `|A(C) − Σ α_k(C) A(C†_k)|`.
    pub fn reconstruction_error(&self, c: &Cycle) -> f64 {
        let direct = self.affinity(c);
        let combined: f64 = self
            .coefficients(c)
            .iter()
            .zip(&self.fundamental)
            .map(|(a, f)| *a as f64 * self.affinity(f))
            .sum();
        (direct - combined).abs()
    }

    /// Cycle obtained by firing `reactions` from the state with index
    /// `start`; each reaction must be a member of a reversible pair whose
    /// edge is present.
    pub fn cycle_from_reactions(
        &self,
        graph: &ThermoGraph,
        start: usize,
        reactions: &[usize],
    ) -> Result<Cycle, ThermoError> {
        let mut at = start;
        let mut steps = Vec::with_capacity(reactions.len());
        for &m in reactions {
            let (pair, forward) = graph
                .pairs()
                .iter()
                .enumerate()
                .find_map(|(k, p)| {
                    if p.forward == m {
                        Some((k, true))
                    } else if p.backward == Some(m) {
                        Some((k, false))
                    } else {
                        None
                    }
                })
                .ok_or_else(|| ThermoError::InvalidCycle(format!("reaction {m} is not part of any pair")))?;
            let lookup = if forward { &self.by_tail } else { &self.by_head };
            let &edge = lookup.get(&(pair, at)).ok_or_else(|| {
                ThermoError::InvalidCycle(format!("reaction {m} has no two-sided transition from state {at}"))
            })?;
            let step = Step { edge, forward };
            at = self.endpoint(at, step);
            steps.push(step);
        }
        let c = Cycle { start, steps };
        self.validate(&c)?;
        Ok(c)
    }
}
