//! Structure of Markov adjacency graphs: strongly connected components and
//! shortest connecting words.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::symbolic::shift::ShiftSpec;
use crate::symbolic::word::{Letter, Word};

/// Tarjan's algorithm, iterative. Components come out with sorted members,
/// ordered by their smallest member.
pub fn strongly_connected_components(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next_index = 0;
    // (vertex, next child position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < succ[v].len() {
                let w = succ[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
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
                        let w = stack.pop().expect("tarjan stack underflow");
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
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Components that carry at least one cycle (more than one vertex, or a
/// self-loop).
pub fn cyclic_components(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    strongly_connected_components(succ)
        .into_iter()
        .filter(|c| c.len() > 1 || succ[c[0]].contains(&c[0]))
        .collect()
}

/// Decomposition of the letters lying on cycles into irreducible pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    pub components: Vec<Vec<Letter>>,
    /// Whether each restriction is irreducible and inclusion-maximal. Strongly
    /// connected components always are; the flag is kept explicit for callers
    /// that audit the decomposition.
    pub maximal_flags: Vec<bool>,
}

pub fn scc_decomposition(spec: &ShiftSpec) -> Result<SccDecomposition> {
    let ShiftSpec::Markov { adjacency } = spec else {
        return Err(Error::Precondition(
            "SCC decomposition needs a markov shift".into(),
        ));
    };
    let succ = adjacency.successors();
    let components: Vec<Vec<Letter>> = cyclic_components(&succ)
        .into_iter()
        .map(|c| c.into_iter().map(|v| v as Letter).collect())
        .collect();
    let maximal_flags = vec![true; components.len()];
    Ok(SccDecomposition {
        components,
        maximal_flags,
    })
}

/// Whether the letters that carry any transition form one irreducible
/// component. Letters with no transitions at all are ignored.
pub fn is_irreducible(spec: &ShiftSpec) -> Result<bool> {
    match spec {
        ShiftSpec::Full { .. } => Ok(true),
        ShiftSpec::Markov { adjacency } => {
            let succ = adjacency.successors();
            let mut used = vec![false; succ.len()];
            for (i, s) in succ.iter().enumerate() {
                for &j in s {
                    used[i] = true;
                    used[j] = true;
                }
            }
            let comps = cyclic_components(&succ);
            Ok(comps.len() == 1 && comps[0].iter().filter(|&&v| used[v]).count() == used.iter().filter(|&&u| u).count())
        }
        _ => Err(Error::Precondition(
            "irreducibility is defined here for full and markov shifts".into(),
        )),
    }
}

/// Shortest connectors `w_{i,j}` with `i·w_{i,j}·j` admissible, for every
/// ordered pair of a component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectorTable {
    pub words: BTreeMap<(Letter, Letter), Word>,
    /// Longest connector length.
    pub max_len: usize,
}

impl ConnectorTable {
    pub fn get(&self, i: Letter, j: Letter) -> Option<&Word> {
        self.words.get(&(i, j))
    }
}

pub fn connecting_words(spec: &ShiftSpec, component: &[Letter]) -> Result<ConnectorTable> {
    let ShiftSpec::Markov { adjacency } = spec else {
        return Err(Error::Precondition(
            "connecting words need a markov shift".into(),
        ));
    };
    if component.is_empty() {
        return Err(Error::Precondition("component is empty".into()));
    }
    for &c in component {
        if c as usize >= adjacency.size() {
            return Err(Error::Input(format!("letter {c} outside the alphabet")));
        }
    }
    let succ = adjacency.successors();
    let mut words = BTreeMap::new();
    for &i in component {
        // BFS over paths of at least one edge starting at i
        let n = succ.len();
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for &j in &succ[i as usize] {
            if !seen[j] {
                seen[j] = true;
                parent[j] = usize::MAX;
                queue.push_back(j);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w in &succ[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        for &j in component {
            if !seen[j as usize] {
                return Err(Error::Precondition(format!(
                    "component is not irreducible: no path from {i} to {j}"
                )));
            }
            let mut inner = Vec::new();
            let mut v = parent[j as usize];
            while v != usize::MAX {
                inner.push(v as Letter);
                v = parent[v];
            }
            inner.reverse();
            words.insert((i, j), Word::new(inner));
        }
    }
    let max_len = words.values().map(Word::len).max().unwrap_or(0);
    Ok(ConnectorTable { words, max_len })
}
