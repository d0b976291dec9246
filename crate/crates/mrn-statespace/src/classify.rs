//! Transient / persistent decomposition of a finite chain and absorption
//! probabilities `μ_ij` from each transient state `i` into each persistent
//! class `j`.

use nalgebra::DMatrix;

use crate::generator::Generator;
use crate::StateSpaceError;

const MAX_TRANSIENT: usize = 4000;

#[derive(Debug, Clone, PartialEq)]
pub struct StateClassification {
    /// Transient state indices (sorted).
    pub transient: Vec<usize>,
    /// Persistent (closed, irreducible) classes, each sorted.
    pub persistent: Vec<Vec<usize>>,
    /// `absorption[i][j]`: probability that the chain started in
    /// `transient[i]` ends in `persistent[j]`.
    pub absorption: Vec<Vec<f64>>,
}

/// Strongly connected components of the transition graph (`j → i` whenever
/// `P_ij > 0`), computed with an iterative Tarjan traversal.
pub fn strongly_connected_components(gen: &Generator) -> Vec<Vec<usize>> {
    let n = gen.dim();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0usize;
    let succ: Vec<Vec<usize>> = (0..n).map(|j| gen.column(j).filter(|(_, v)| *v > 0.0).map(|(i, _)| i).collect()).collect();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // frames of (node, next successor position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < succ[v].len() {
                let w = succ[v][*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("Tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Splits the state space into transient states and persistent classes
/// (terminal strongly connected components) and computes
/// `μ_ij = −Σ_{j′∈P_j} Σ_{i′∈T} [P_{P_j,T}]_{j′i′} [P_{TT}⁻¹]_{i′i}`.
pub fn classify_communicating_structure(gen: &Generator) -> Result<StateClassification, StateSpaceError> {
    let n = gen.dim();
    let comps = strongly_connected_components(gen);
    let mut comp_of = vec![0usize; n];
    for (c, members) in comps.iter().enumerate() {
        for &s in members {
            comp_of[s] = c;
        }
    }
    let mut terminal = vec![true; comps.len()];
    for j in 0..n {
        for (i, v) in gen.column(j) {
            if v > 0.0 && comp_of[i] != comp_of[j] {
                terminal[comp_of[j]] = false;
            }
        }
    }
    let mut persistent: Vec<Vec<usize>> =
        comps.iter().enumerate().filter(|(c, _)| terminal[*c]).map(|(_, m)| m.clone()).collect();
    persistent.sort();
    let mut transient: Vec<usize> = (0..n).filter(|s| !terminal[comp_of[*s]]).collect();
    transient.sort_unstable();

    let nt = transient.len();
    if nt == 0 {
        return Ok(StateClassification { transient, persistent, absorption: Vec::new() });
    }
    if nt > MAX_TRANSIENT {
        return Err(StateSpaceError::TooLarge { dim: nt, limit: MAX_TRANSIENT });
    }
    let mut pos = vec![usize::MAX; n];
    for (k, &s) in transient.iter().enumerate() {
        pos[s] = k;
    }
    let mut class_of = vec![usize::MAX; n];
    for (c, members) in persistent.iter().enumerate() {
        for &s in members {
            class_of[s] = c;
        }
    }
    // P_TT and w_j = 1ᵀ P_{P_j, T}
    let mut ptt = DMatrix::<f64>::zeros(nt, nt);
    let mut w = DMatrix::<f64>::zeros(nt, persistent.len());
    for (b, &j) in transient.iter().enumerate() {
        ptt[(b, b)] = gen.diagonal()[j];
        for (i, v) in gen.column(j) {
            if pos[i] != usize::MAX {
                ptt[(pos[i], b)] += v;
            } else if class_of[i] != usize::MAX {
                w[(b, class_of[i])] += v;
            }
        }
    }
    // μ_{·j} = −P_TTᵀ⁻¹ w_j
    let lu = ptt.transpose().lu();
    let u = lu.solve(&w).ok_or(StateSpaceError::SingularTransientBlock)?;
    let absorption = (0..nt).map(|i| (0..persistent.len()).map(|j| (-u[(i, j)]).max(0.0)).collect()).collect();
    Ok(StateClassification { transient, persistent, absorption })
}
