//! Small directed-graph helpers shared by the shift, orbit and face modules.

/// Directed graph stored as sorted successor lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    succ: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn from_successors(mut succ: Vec<Vec<usize>>) -> Self {
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        Digraph { succ }
    }

    pub fn from_matrix(m: &[Vec<u8>]) -> Self {
        let succ = m
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &a)| a != 0).map(|(j, _)| j).collect())
            .collect();
        Digraph { succ }
    }

    /// Pattern of a nonnegative real matrix.
    pub fn from_weights(m: &[Vec<f64>]) -> Self {
        let succ = m
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &a)| a > 0.0).map(|(j, _)| j).collect())
            .collect();
        Digraph { succ }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.succ[i].binary_search(&j).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn to_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.len();
        let mut m = vec![vec![0u8; n]; n];
        for (i, j) in self.edges() {
            m[i][j] = 1;
        }
        m
    }

    /// Subgraph induced by `nodes` (given in any order), relabelled `0..nodes.len()`
    /// in the order supplied.
    pub fn induced(&self, nodes: &[usize]) -> Digraph {
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &v) in nodes.iter().enumerate() {
            pos[v] = i;
        }
        let succ = nodes
            .iter()
            .map(|&v| {
                self.succ[v]
                    .iter()
                    .filter(|&&w| pos[w] != usize::MAX)
                    .map(|&w| pos[w])
                    .collect()
            })
            .collect();
        Digraph::from_successors(succ)
    }

    /// Keep only the listed edges.
    pub fn with_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Digraph {
        let mut succ = vec![Vec::new(); n];
        for (i, j) in edges {
            succ[i].push(j);
        }
        Digraph::from_successors(succ)
    }

    /// Strongly connected components, each sorted, ordered by smallest member.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;
        // Iterative Tarjan: frames of (node, next successor position).
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut frames = vec![(root, 0usize)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(top) = frames.last_mut() {
                let v = top.0;
                if top.1 < self.succ[v].len() {
                    let w = self.succ[v][top.1];
                    top.1 += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        frames.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    frames.pop();
                    if let Some(&(parent, _)) = frames.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
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

    /// A component is nontrivial when it carries at least one internal edge.
    pub fn is_nontrivial(&self, comp: &[usize]) -> bool {
        comp.len() > 1 || self.has_edge(comp[0], comp[0])
    }

    pub fn is_irreducible(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        let comps = self.sccs();
        comps.len() == 1 && self.is_nontrivial(&comps[0])
    }

    /// Strongly connected and every node has exactly one successor: a single cycle.
    pub fn is_single_cycle(&self) -> bool {
        self.is_irreducible() && self.succ.iter().all(|s| s.len() == 1)
    }
}
