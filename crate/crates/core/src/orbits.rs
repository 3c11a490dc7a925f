//! k-elementary periodic orbits.
//!
//! A periodic point is k-elementary when its orbit visits pairwise distinct
//! k-cylinders, i.e. when it traces a simple cycle in the k-block graph.
//! Orbits are enumerated with Johnson's circuit algorithm and stored by a
//! canonical generating segment (the lexicographically least rotation).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::numeric::Scalar;
use crate::potential::Potential;
use crate::sft::{recode_to_one_step, RecodedSft, Sft};

pub const DEFAULT_MAX_ORBITS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementaryOrbit {
    /// Window length the orbit was enumerated at.
    pub k: usize,
    /// Generating segment, lexicographically least rotation.
    pub segment: Vec<usize>,
    /// Recoded state ids along the orbit, aligned with `segment`.
    pub states: Vec<usize>,
}

impl ElementaryOrbit {
    pub fn period(&self) -> usize {
        self.segment.len()
    }

    /// The set of k-cylinders visited, sorted.
    pub fn cylinder_set(&self) -> Vec<usize> {
        let mut c = self.states.clone();
        c.sort_unstable();
        c
    }

    /// Directed edges of the recoded graph traversed by the orbit.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.states.len();
        (0..n).map(move |i| (self.states[i], self.states[(i + 1) % n]))
    }

    pub(crate) fn from_cycle(recoded: &RecodedSft, cycle: Vec<usize>) -> Self {
        let segment: Vec<usize> = cycle.iter().map(|&s| recoded.block(s)[0]).collect();
        let r = least_rotation(&segment);
        let n = segment.len();
        ElementaryOrbit {
            k: recoded.k(),
            segment: (0..n).map(|i| segment[(r + i) % n]).collect(),
            states: (0..n).map(|i| cycle[(r + i) % n]).collect(),
        }
    }
}

/// Index of the lexicographically least rotation (first one on ties).
pub fn least_rotation(word: &[usize]) -> usize {
    let n = word.len();
    (0..n)
        .min_by(|&a, &b| {
            (0..n)
                .map(|i| word[(a + i) % n])
                .cmp((0..n).map(|i| word[(b + i) % n]))
        })
        .unwrap_or(0)
}

pub fn canonical_rotation(word: &[usize]) -> Vec<usize> {
    let r = least_rotation(word);
    (0..word.len()).map(|i| word[(r + i) % word.len()]).collect()
}

/// Uniform measure on an orbit; kept implicit as the orbit plus weight `1/n`.
#[derive(Clone, Debug)]
pub struct OrbitMeasure<'a> {
    pub orbit: &'a ElementaryOrbit,
}

impl OrbitMeasure<'_> {
    pub fn weights(&self) -> Vec<f64> {
        let n = self.orbit.period();
        vec![1.0 / n as f64; n]
    }
}

pub fn elementary_orbits(sft: &Sft, k: usize) -> Result<Vec<ElementaryOrbit>> {
    elementary_orbits_capped(sft, k, DEFAULT_MAX_ORBITS)
}

pub fn elementary_orbits_capped(sft: &Sft, k: usize, max_orbits: usize) -> Result<Vec<ElementaryOrbit>> {
    let recoded = recode_to_one_step(sft, k)?;
    orbits_of_recoded(&recoded, max_orbits)
}

pub fn orbits_of_recoded(recoded: &RecodedSft, max_orbits: usize) -> Result<Vec<ElementaryOrbit>> {
    orbits_in_subgraph(recoded, recoded.graph(), max_orbits)
}

/// Elementary orbits using only edges of `g`, a subgraph of the recoded graph.
pub fn orbits_in_subgraph(recoded: &RecodedSft, g: &Digraph, max_orbits: usize) -> Result<Vec<ElementaryOrbit>> {
    let cycles = simple_cycles(g, max_orbits)?;
    let mut orbits: Vec<ElementaryOrbit> = cycles
        .into_iter()
        .map(|c| ElementaryOrbit::from_cycle(recoded, c))
        .collect();
    orbits.sort_by(|a, b| (a.period(), &a.segment).cmp(&(b.period(), &b.segment)));
    Ok(orbits)
}

/// All simple cycles of `g` (Johnson 1975), each starting at its least node.
pub fn simple_cycles(g: &Digraph, max_cycles: usize) -> Result<Vec<Vec<usize>>> {
    let n = g.len();
    let mut out = Vec::new();
    for start in 0..n {
        // Strongly connected component of `start` within nodes >= start.
        let nodes: Vec<usize> = (start..n).collect();
        let sub = g.induced(&nodes);
        let comp = sub
            .sccs()
            .into_iter()
            .find(|c| c.contains(&0))
            .expect("start is in some component");
        if !sub.is_nontrivial(&comp) {
            continue;
        }
        let mut in_comp = vec![false; n];
        for &c in &comp {
            in_comp[c + start] = true;
        }
        let mut search = CircuitSearch {
            g,
            in_comp: &in_comp,
            blocked: vec![false; n],
            block_map: vec![Vec::new(); n],
            path: Vec::new(),
            out: &mut out,
            max: max_cycles,
        };
        search.circuit(start, start)?;
    }
    Ok(out)
}

struct CircuitSearch<'a> {
    g: &'a Digraph,
    in_comp: &'a [bool],
    blocked: Vec<bool>,
    block_map: Vec<Vec<usize>>,
    path: Vec<usize>,
    out: &'a mut Vec<Vec<usize>>,
    max: usize,
}

impl CircuitSearch<'_> {
    fn unblock(&mut self, v: usize) {
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if self.blocked[u] {
                self.blocked[u] = false;
                stack.extend(std::mem::take(&mut self.block_map[u]));
            }
        }
    }

    fn circuit(&mut self, v: usize, start: usize) -> Result<bool> {
        let mut found = false;
        self.path.push(v);
        self.blocked[v] = true;
        for &w in self.g.successors(v) {
            if !self.in_comp[w] {
                continue;
            }
            if w == start {
                if self.out.len() >= self.max {
                    return Err(Error::ResourceLimit(format!(
                        "more than {} elementary orbits",
                        self.max
                    )));
                }
                self.out.push(self.path.clone());
                found = true;
            } else if !self.blocked[w] && self.circuit(w, start)? {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in self.g.successors(v) {
                if self.in_comp[w] && !self.block_map[w].contains(&v) {
                    self.block_map[w].push(v);
                }
            }
        }
        self.path.pop();
        Ok(found)
    }
}

/// Birkhoff average `(1/n) Σ Φ(fⁱx)` of a potential along an orbit.
///
/// The potential may live on shorter windows than the orbit; its values
/// are looked up through the leading block of each window.
pub fn birkhoff_average<T: Scalar>(orbit: &ElementaryOrbit, potential: &Potential<T>) -> Result<Vec<T>> {
    if potential.k() > orbit.k {
        return Err(Error::invalid(format!(
            "potential window {} exceeds orbit window {}",
            potential.k(),
            orbit.k
        )));
    }
    let n = orbit.period();
    let mut sum = vec![T::zero(); potential.m()];
    for i in 0..n {
        let state = potential
            .recoded()
            .cyclic_window(&orbit.segment, i)
            .ok_or_else(|| Error::invalid("orbit is not admissible for the potential's shift"))?;
        for (acc, v) in sum.iter_mut().zip(potential.value(state)) {
            *acc = acc.clone() + v.clone();
        }
    }
    let nn = T::from_int(n as i64);
    Ok(sum.into_iter().map(|s| s / nn.clone()).collect())
}

/// Partition orbit indices by equality of visited cylinder sets.
pub fn permutability_classes(orbits: &[ElementaryOrbit]) -> Vec<Vec<usize>> {
    let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, o) in orbits.iter().enumerate() {
        classes.entry(o.cylinder_set()).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = classes.into_values().collect();
    out.sort_by_key(|c| c[0]);
    out
}

pub fn are_permutable(a: &ElementaryOrbit, b: &ElementaryOrbit) -> bool {
    a.k == b.k && a.cylinder_set() == b.cylinder_set()
}

/// JSON row of an orbit table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub period: usize,
    pub segment: String,
    pub cylinders: Vec<usize>,
}

pub fn orbit_records(sft: &Sft, orbits: &[ElementaryOrbit]) -> Vec<OrbitRecord> {
    orbits
        .iter()
        .map(|o| OrbitRecord {
            period: o.period(),
            segment: sft.word(&o.segment),
            cylinders: o.states.clone(),
        })
        .collect()
}

/// Rebuild orbits from table rows, validating them against the recoded shift.
pub fn orbits_from_records(recoded: &RecodedSft, records: &[OrbitRecord]) -> Result<Vec<ElementaryOrbit>> {
    records
        .iter()
        .map(|r| {
            let segment = recoded.base().parse_word(&r.segment)?;
            let states: Option<Vec<usize>> = (0..segment.len())
                .map(|i| recoded.cyclic_window(&segment, i))
                .collect();
            let states = states.ok_or_else(|| Error::invalid(format!("segment {} is not admissible", r.segment)))?;
            if states != r.cylinders || r.period != segment.len() {
                return Err(Error::invalid(format!("inconsistent orbit record {}", r.segment)));
            }
            Ok(ElementaryOrbit {
                k: recoded.k(),
                segment,
                states,
            })
        })
        .collect()
}
