//! Shifts of finite type presented as labelled graphs on blocks.
//!
//! A state is a block of `memory` letters; an edge appends one letter and
//! moves to the block formed by the last `memory` letters. Words of length
//! at least `memory` are in bijection with (start state, edge path) pairs.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::symbolic::graph::cyclic_components;
use crate::symbolic::shift::{Adjacency, ShiftSpec};
use crate::symbolic::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq)]
pub struct SftGraph {
    memory: usize,
    states: Vec<Word>,
    edges: Vec<Vec<(Letter, usize)>>,
}

impl SftGraph {
    /// Builds the graph from a state list and an edge predicate on the
    /// extended block `state·letter`. Edges whose target block is not a state
    /// are dropped.
    pub fn from_blocks<F>(memory: usize, states: Vec<Word>, alphabet_size: usize, mut allowed: F) -> Self
    where
        F: FnMut(&[Letter]) -> bool,
    {
        let index: HashMap<Word, usize> = states.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut edges = Vec::with_capacity(states.len());
        let mut block = Vec::with_capacity(memory + 1);
        for u in &states {
            let mut out = Vec::new();
            for a in 0..alphabet_size as Letter {
                block.clear();
                block.extend_from_slice(u.letters());
                block.push(a);
                if !allowed(&block) {
                    continue;
                }
                if let Some(&target) = index.get(&Word::from(&block[1..])) {
                    out.push((a, target));
                }
            }
            edges.push(out);
        }
        SftGraph { memory, states, edges }
    }

    /// One state per letter; edge `i → j` labelled `j` when `(i, j) ∈ S`.
    pub fn from_adjacency(adjacency: &Adjacency) -> Self {
        let k = adjacency.size();
        let states = (0..k as Letter).map(|l| Word::new(vec![l])).collect();
        let edges = (0..k as Letter)
            .map(|i| {
                (0..k as Letter)
                    .filter(|&j| adjacency.allows(i, j))
                    .map(|j| (j, j as usize))
                    .collect()
            })
            .collect();
        SftGraph { memory: 1, states, edges }
    }

    /// A single state with a loop per letter.
    pub fn full(alphabet_size: usize) -> Self {
        SftGraph {
            memory: 0,
            states: vec![Word::empty()],
            edges: vec![(0..alphabet_size as Letter).map(|a| (a, 0)).collect()],
        }
    }

    pub fn from_shift(spec: &ShiftSpec) -> Result<Self> {
        match spec.normalized() {
            ShiftSpec::Full { alphabet_size } => Ok(Self::full(alphabet_size)),
            ShiftSpec::Markov { adjacency } => Ok(Self::from_adjacency(&adjacency)),
            _ => Err(Error::Precondition(
                "only full and markov shifts have a one-block presentation".into(),
            )),
        }
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn states(&self) -> &[Word] {
        &self.states
    }

    pub fn edges(&self) -> &[Vec<(Letter, usize)>] {
        &self.edges
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn successors(&self) -> Vec<Vec<usize>> {
        self.edges
            .iter()
            .map(|e| {
                let mut s: Vec<usize> = e.iter().map(|&(_, t)| t).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect()
    }

    /// States from which an infinite path starts.
    pub fn live_states(&self) -> Vec<bool> {
        let n = self.states.len();
        let mut live = vec![true; n];
        let mut out_degree: Vec<usize> = self.edges.iter().map(Vec::len).collect();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (u, e) in self.edges.iter().enumerate() {
            for &(_, v) in e {
                preds[v].push(u);
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&u| out_degree[u] == 0).collect();
        while let Some(v) = queue.pop() {
            if !live[v] {
                continue;
            }
            live[v] = false;
            for &u in &preds[v] {
                out_degree[u] -= 1;
                if out_degree[u] == 0 && live[u] {
                    queue.push(u);
                }
            }
        }
        live
    }

    /// Strongly connected components that carry a cycle.
    pub fn components(&self) -> Vec<Vec<usize>> {
        cyclic_components(&self.successors())
    }

    /// Visits every word of length `n` of the shift presented by the live
    /// part of the graph, in lexicographic order.
    pub fn walk_words<F>(&self, n: usize, visitor: &mut F) -> Result<()>
    where
        F: FnMut(&[Letter]) -> Result<()>,
    {
        let live = self.live_states();
        let mut order: Vec<usize> = (0..self.states.len()).filter(|&u| live[u]).collect();
        order.sort_by(|&a, &b| self.states[a].cmp(&self.states[b]));
        if n < self.memory {
            let mut last: Option<&[Letter]> = None;
            for &u in &order {
                let p = &self.states[u].letters()[..n];
                if last != Some(p) {
                    visitor(p)?;
                    last = Some(p);
                }
            }
            return Ok(());
        }
        let mut buf: Vec<Letter> = Vec::with_capacity(n);
        for &u in &order {
            buf.clear();
            buf.extend_from_slice(self.states[u].letters());
            self.walk_from(u, n, &live, &mut buf, visitor)?;
        }
        Ok(())
    }

    fn walk_from<F>(&self, u: usize, n: usize, live: &[bool], buf: &mut Vec<Letter>, visitor: &mut F) -> Result<()>
    where
        F: FnMut(&[Letter]) -> Result<()>,
    {
        if buf.len() == n {
            return visitor(buf);
        }
        for &(a, v) in &self.edges[u] {
            if !live[v] {
                continue;
            }
            buf.push(a);
            self.walk_from(v, n, live, buf, visitor)?;
            buf.pop();
        }
        Ok(())
    }

    pub fn language(&self, n: usize, max_words: u64) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        self.walk_words(n, &mut |w| {
            if out.len() as u64 >= max_words {
                return Err(Error::Resource {
                    what: format!("finite-type language of length {n}"),
                    estimate: max_words as u128 + 1,
                    budget: max_words as u128,
                });
            }
            out.push(Word::from(w));
            Ok(())
        })?;
        Ok(out)
    }

    /// `|L_n|` by counting paths on the live part.
    pub fn count_language(&self, n: usize) -> u128 {
        if n < self.memory {
            let mut count = 0u128;
            let _ = self.walk_words(n, &mut |_| {
                count += 1;
                Ok(())
            });
            return count;
        }
        let live = self.live_states();
        let mut paths: Vec<u128> = live.iter().map(|&l| l as u128).collect();
        // paths[u]: number of live paths of the remaining length from u
        for _ in self.memory..n {
            paths = self
                .edges
                .iter()
                .enumerate()
                .map(|(u, e)| {
                    if !live[u] {
                        return 0;
                    }
                    e.iter().fold(0u128, |acc, &(_, v)| acc.saturating_add(paths[v]))
                })
                .collect();
        }
        paths.iter().fold(0u128, |a, &b| a.saturating_add(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_graph_counts_match_language() {
        let spec = ShiftSpec::markov(2, &[(0, 0), (0, 1), (1, 0)]).unwrap();
        let g = SftGraph::from_shift(&spec).unwrap();
        for n in 1..=10 {
            assert_eq!(
                g.count_language(n),
                crate::symbolic::count_language(&spec, n).unwrap()
            );
        }
        let words: Vec<String> = g.language(3, 100).unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(words, vec!["000", "001", "010", "100", "101"]);
    }

    #[test]
    fn full_graph() {
        let g = SftGraph::full(3);
        assert_eq!(g.count_language(4), 81);
        assert_eq!(g.components(), vec![vec![0]]);
    }

    #[test]
    fn dead_states_are_trimmed() {
        // 0 -> 1 -> 2, 2 has no successor; 0 loops
        let states = vec![Word::new(vec![0]), Word::new(vec![1]), Word::new(vec![2])];
        let g = SftGraph::from_blocks(1, states, 3, |b| matches!(b, [0, 0] | [0, 1] | [1, 2]));
        assert_eq!(g.live_states(), vec![true, false, false]);
        assert_eq!(g.count_language(3), 1);
    }
}
