//! Subshifts of finite type and their higher-block recodings.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Digraph;

/// One-sided subshift of finite type on the alphabet `0..d`.
///
/// Every symbol has at least one successor and one predecessor; use
/// [`Sft::pruned`] to remove dead letters from an arbitrary matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sft {
    d: usize,
    transition: Vec<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct SftFile {
    d: Option<usize>,
    transition: Vec<Vec<u8>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

impl Sft {
    /// Validating constructor: rejects non-square or non-0/1 matrices and dead letters.
    pub fn new(transition: Vec<Vec<u8>>, labels: Option<Vec<String>>) -> Result<Sft> {
        let d = transition.len();
        if d == 0 {
            return Err(Error::EmptyShift("alphabet is empty".into()));
        }
        check_square_01(&transition)?;
        if let Some(l) = &labels {
            if l.len() != d {
                return Err(Error::invalid(format!("{} labels for {} symbols", l.len(), d)));
            }
        }
        for i in 0..d {
            if !transition[i].contains(&1) {
                return Err(Error::invalid(format!("symbol {i} has no successor")));
            }
            if !transition.iter().any(|row| row[i] == 1) {
                return Err(Error::invalid(format!("symbol {i} has no predecessor")));
            }
        }
        Ok(Sft {
            d,
            transition,
            labels,
        })
    }

    /// Iteratively drop symbols with an all-zero row or column.
    ///
    /// Returns the pruned shift and, for each surviving symbol, its index in
    /// the input alphabet.
    pub fn pruned(transition: Vec<Vec<u8>>, labels: Option<Vec<String>>) -> Result<(Sft, Vec<usize>)> {
        check_square_01(&transition)?;
        let n = transition.len();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for i in 0..n {
                if !alive[i] {
                    continue;
                }
                let out = (0..n).any(|j| alive[j] && transition[i][j] == 1);
                let inc = (0..n).any(|j| alive[j] && transition[j][i] == 1);
                if !out || !inc {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let kept: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
        if kept.is_empty() {
            return Err(Error::EmptyShift("every symbol was pruned".into()));
        }
        let sub = kept
            .iter()
            .map(|&i| kept.iter().map(|&j| transition[i][j]).collect())
            .collect();
        let labels = labels.map(|l| kept.iter().map(|&i| l[i].clone()).collect());
        Ok((Sft::new(sub, labels)?, kept))
    }

    /// Pruning a valid shift is the identity.
    pub fn prune(&self) -> Sft {
        self.clone()
    }

    pub fn full(d: usize) -> Sft {
        Sft::new(vec![vec![1; d]; d], None).expect("full shift is valid")
    }

    /// Golden-mean shift: the word `11` is forbidden.
    pub fn golden_mean() -> Sft {
        Sft::new(vec![vec![1, 1], vec![1, 0]], None).expect("valid")
    }

    pub fn from_json(text: &str) -> Result<Sft> {
        let raw: SftFile = serde_json::from_str(text)?;
        if let Some(d) = raw.d {
            if d != raw.transition.len() {
                return Err(Error::invalid(format!(
                    "\"d\" = {d} but transition has {} rows",
                    raw.transition.len()
                )));
            }
        }
        Sft::new(raw.transition, raw.labels)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn transition(&self) -> &[Vec<u8>] {
        &self.transition
    }

    pub fn allows(&self, a: usize, b: usize) -> bool {
        self.transition[a][b] == 1
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Render a word; symbols are concatenated when every label is one character.
    pub fn word(&self, symbols: &[usize]) -> String {
        let parts: Vec<String> = symbols.iter().map(|&s| self.label(s)).collect();
        if parts.iter().all(|p| p.chars().count() == 1) {
            parts.concat()
        } else {
            parts.join(".")
        }
    }

    /// Inverse of [`Sft::word`].
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>> {
        let names: Vec<String> = (0..self.d).map(|a| self.label(a)).collect();
        let single = names.iter().all(|p| p.chars().count() == 1);
        let tokens: Vec<String> = if single && !text.contains('.') {
            text.chars().map(|c| c.to_string()).collect()
        } else {
            text.split('.').map(str::to_string).collect()
        };
        tokens
            .iter()
            .map(|t| {
                names
                    .iter()
                    .position(|n| n == t)
                    .ok_or_else(|| Error::invalid(format!("unknown symbol '{t}' in word '{text}'")))
            })
            .collect()
    }

    pub fn graph(&self) -> Digraph {
        Digraph::from_matrix(&self.transition)
    }

    pub fn is_admissible(&self, word: &[usize]) -> bool {
        word.iter().all(|&s| s < self.d) && word.windows(2).all(|w| self.allows(w[0], w[1]))
    }
}

fn check_square_01(m: &[Vec<u8>]) -> Result<()> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::invalid(format!("row {i} has length {} (expected {n})", row.len())));
        }
        if row.iter().any(|&a| a > 1) {
            return Err(Error::invalid(format!("row {i} has entries outside {{0,1}}")));
        }
    }
    Ok(())
}

/// A strongly connected component of a shift's transition graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentInfo {
    pub states: Vec<usize>,
    pub is_nontrivial: bool,
}

pub fn strongly_connected_components(sft: &Sft) -> Vec<ComponentInfo> {
    components_of(&sft.graph())
}

pub(crate) fn components_of(g: &Digraph) -> Vec<ComponentInfo> {
    g.sccs()
        .into_iter()
        .map(|states| ComponentInfo {
            is_nontrivial: g.is_nontrivial(&states),
            states,
        })
        .collect()
}

pub fn is_transitive(sft: &Sft) -> bool {
    sft.graph().is_irreducible()
}

/// The one-step shift on admissible `k`-blocks, conjugate to the base shift.
///
/// States are ordered lexicographically; block `b₁…b_k` has an edge to
/// `c₁…c_k` iff `b₂…b_k = c₁…c_{k−1}` and `b_k → c_k` is allowed.
#[derive(Clone, Debug)]
pub struct RecodedSft {
    base: Sft,
    k: usize,
    states: Vec<Vec<usize>>,
    block_index: HashMap<Vec<usize>, usize>,
    graph: Digraph,
}

pub fn recode_to_one_step(sft: &Sft, k: usize) -> Result<RecodedSft> {
    if k == 0 {
        return Err(Error::invalid("window length k must be at least 1"));
    }
    // Depth-first extension in symbol order yields lexicographic blocks.
    let mut states: Vec<Vec<usize>> = (0..sft.d()).map(|a| vec![a]).collect();
    for _ in 1..k {
        let mut next = Vec::new();
        for b in &states {
            let last = *b.last().expect("nonempty block");
            for c in 0..sft.d() {
                if sft.allows(last, c) {
                    let mut nb = b.clone();
                    nb.push(c);
                    next.push(nb);
                }
            }
        }
        states = next;
    }
    if states.is_empty() {
        return Err(Error::EmptyShift(format!("no admissible {k}-block")));
    }
    let block_index: HashMap<Vec<usize>, usize> =
        states.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
    let succ = states
        .iter()
        .map(|b| {
            let last = b[k - 1];
            (0..sft.d())
                .filter(|&c| sft.allows(last, c))
                .filter_map(|c| {
                    let mut nb: Vec<usize> = b[1..].to_vec();
                    nb.push(c);
                    block_index.get(&nb).copied()
                })
                .collect()
        })
        .collect();
    Ok(RecodedSft {
        base: sft.clone(),
        k,
        states,
        block_index,
        graph: Digraph::from_successors(succ),
    })
}

impl RecodedSft {
    pub fn base(&self) -> &Sft {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of admissible `k`-cylinders, `m_c(k)`.
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    pub fn block(&self, id: usize) -> &[usize] {
        &self.states[id]
    }

    pub fn index_of(&self, block: &[usize]) -> Option<usize> {
        self.block_index.get(block).copied()
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn transition(&self) -> Vec<Vec<u8>> {
        self.graph.to_matrix()
    }

    /// The recoded shift viewed as a base shift in its own right.
    pub fn as_sft(&self) -> Sft {
        let labels = self.states.iter().map(|b| self.base.word(b)).collect();
        Sft::new(self.transition(), Some(labels)).expect("recoded shift of a valid shift is valid")
    }

    pub fn block_name(&self, id: usize) -> String {
        self.base.word(&self.states[id])
    }

    /// State id of the length-`k` window of a periodic word starting at `start`.
    pub fn cyclic_window(&self, word: &[usize], start: usize) -> Option<usize> {
        let n = word.len();
        let block: Vec<usize> = (0..self.k).map(|i| word[(start + i) % n]).collect();
        self.index_of(&block)
    }
}
