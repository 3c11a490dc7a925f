//! Maximum cycle means and maximizing face subshifts.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::numeric::{Scalar, DEFAULT_TOL};
use crate::potential::Potential;
use crate::thermo::{parry_of_matrix, MarkovMeasure};

/// Relative tolerance used when comparing component entropies.
pub const ENTROPY_TIE_TOL: f64 = 1e-9;

/// Karp's maximum cycle mean on one strongly connected graph.
fn karp<T: Scalar>(g: &Digraph, w: &[T]) -> Option<T> {
    let n = g.len();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, j) in g.edges() {
        preds[j].push(i);
    }
    // table[k][v] = max weight of a k-edge walk from node 0 to v
    let mut table: Vec<Vec<Option<T>>> = vec![vec![None; n]; n + 1];
    table[0][0] = Some(T::zero());
    for k in 1..=n {
        for v in 0..n {
            let mut best: Option<T> = None;
            for &i in &preds[v] {
                if let Some(x) = &table[k - 1][i] {
                    let c = x.clone() + w[i].clone();
                    if best.as_ref().is_none_or(|b| c > *b) {
                        best = Some(c);
                    }
                }
            }
            table[k][v] = best;
        }
    }
    let mut beta: Option<T> = None;
    for v in 0..n {
        let Some(dn) = &table[n][v] else { continue };
        let mut worst: Option<T> = None;
        for (k, row) in table.iter().enumerate().take(n) {
            if let Some(dk) = &row[v] {
                let c = (dn.clone() - dk.clone()) / T::from_int((n - k) as i64);
                if worst.as_ref().is_none_or(|b| c < *b) {
                    worst = Some(c);
                }
            }
        }
        if let Some(c) = worst {
            if beta.as_ref().is_none_or(|b| c > *b) {
                beta = Some(c);
            }
        }
    }
    beta
}

/// Maximum mean weight `β` over cycles, with node weights `w` charged on
/// the source of every edge, and potentials `u` with
/// `w_i − β + u_i − u_j ≤ 0` on every edge.
pub fn max_cycle_mean<T: Scalar>(g: &Digraph, w: &[T]) -> Result<(T, Vec<T>)> {
    if w.len() != g.len() {
        return Err(Error::invalid("one weight per node expected"));
    }
    let mut beta: Option<T> = None;
    for comp in g.sccs() {
        if !g.is_nontrivial(&comp) {
            continue;
        }
        let sub = g.induced(&comp);
        let sw: Vec<T> = comp.iter().map(|&v| w[v].clone()).collect();
        if let Some(b) = karp(&sub, &sw) {
            if beta.as_ref().is_none_or(|x| b > *x) {
                beta = Some(b);
            }
        }
    }
    let beta = beta.ok_or(Error::NoCycle)?;
    // Longest paths from a virtual source on w − β: no positive cycles.
    let n = g.len();
    let mut u = vec![T::zero(); n];
    for _ in 0..=n {
        let mut changed = false;
        for (i, j) in g.edges() {
            let c = u[i].clone() + w[i].clone() - beta.clone();
            if c > u[j] {
                u[j] = c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok((beta, u))
}

/// One transitive component `X_i` of a face subshift.
#[derive(Clone, Debug, Serialize)]
pub struct FaceComponent {
    /// Recoded state ids, sorted.
    pub states: Vec<usize>,
    /// Tight transitions among `states`, in the order of `states`.
    pub transition: Vec<Vec<u8>>,
    pub h_top: f64,
    pub is_singleton_orbit: bool,
    pub parry: MarkovMeasure,
}

/// The face subshift `X_F` of the maximizing direction of a scalar potential.
#[derive(Clone, Debug)]
pub struct FaceSubshift<T: Scalar> {
    pub beta: T,
    pub potentials: Vec<T>,
    pub tight_edges: Vec<(usize, usize)>,
    pub components: Vec<FaceComponent>,
    pub max_entropy_ids: Vec<usize>,
    /// Float mode only: some edge was declared tight inside the tolerance band.
    pub tolerance_limited: bool,
}

impl<T: Scalar> FaceSubshift<T> {
    pub fn h_top(&self) -> f64 {
        self.components.iter().map(|c| c.h_top).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn tight_graph(&self, n: usize) -> Digraph {
        Digraph::with_edges(n, self.tight_edges.iter().copied())
    }

    /// Component containing a recoded state, if any.
    pub fn component_of(&self, state: usize) -> Option<usize> {
        self.components.iter().position(|c| c.states.binary_search(&state).is_ok())
    }

    /// Whether the cyclic state sequence stays inside `X_F`.
    pub fn contains_cycle(&self, states: &[usize]) -> bool {
        let n = states.len();
        let Some(c) = states.first().and_then(|&s| self.component_of(s)) else {
            return false;
        };
        let comp = &self.components[c];
        (0..n).all(|i| {
            let (a, b) = (states[i], states[(i + 1) % n]);
            match (comp.states.binary_search(&a), comp.states.binary_search(&b)) {
                (Ok(x), Ok(y)) => comp.transition[x][y] == 1,
                _ => false,
            }
        })
    }

    pub fn max_entropy_components(&self) -> impl Iterator<Item = &FaceComponent> {
        self.max_entropy_ids.iter().map(|&i| &self.components[i])
    }
}

/// Serialisable summary of a face subshift.
#[derive(Clone, Debug, Serialize)]
pub struct FaceSummary {
    pub beta: String,
    pub tight_edges: Vec<(String, String)>,
    pub components: Vec<ComponentSummary>,
    pub max_entropy_ids: Vec<usize>,
    pub tolerance_limited: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentSummary {
    pub states: Vec<String>,
    pub entropy: f64,
    pub singleton_orbit: bool,
    pub parry_p: Vec<f64>,
    pub parry_transition: Vec<Vec<f64>>,
}

impl<T: Scalar> FaceSubshift<T> {
    pub fn summary(&self, phi: &Potential<T>) -> FaceSummary {
        let r = phi.recoded();
        FaceSummary {
            beta: self.beta.to_text(),
            tight_edges: self
                .tight_edges
                .iter()
                .map(|&(i, j)| (r.block_name(i), r.block_name(j)))
                .collect(),
            components: self
                .components
                .iter()
                .map(|c| ComponentSummary {
                    states: c.states.iter().map(|&s| r.block_name(s)).collect(),
                    entropy: c.h_top,
                    singleton_orbit: c.is_singleton_orbit,
                    parry_p: c.parry.p.clone(),
                    parry_transition: c.parry.transition.clone(),
                })
                .collect(),
            max_entropy_ids: self.max_entropy_ids.clone(),
            tolerance_limited: self.tolerance_limited,
        }
    }
}

/// Indices whose entropy ties the maximum up to a relative tolerance.
pub(crate) fn entropy_argmax(h: &[f64]) -> Vec<usize> {
    let hmax = h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = ENTROPY_TIE_TOL * hmax.abs().max(1.0);
    (0..h.len()).filter(|&i| h[i] >= hmax - tol).collect()
}

/// `X_F` for the face of `Rot(φ)` in direction `+1`.
pub fn maximizing_subshift<T: Scalar>(phi: &Potential<T>) -> Result<FaceSubshift<T>> {
    maximizing_subshift_tol(phi, DEFAULT_TOL)
}

pub fn maximizing_subshift_tol<T: Scalar>(phi: &Potential<T>, tol: f64) -> Result<FaceSubshift<T>> {
    if phi.m() != 1 {
        return Err(Error::invalid("maximizing subshift needs a scalar potential"));
    }
    let rec = phi.recoded();
    face_of_graph(rec.graph(), &phi.scalar_values(), tol, |s| rec.block(s).to_vec())
}

/// `β`, the potentials `u`, the edges with zero reduced weight, and whether
/// any was tight only up to the tolerance.
pub type TightEdges<T> = (T, Vec<T>, Vec<(usize, usize)>, bool);

/// Tight edges of `g` under node weights `w`.
pub fn tight_edges<T: Scalar>(g: &Digraph, w: &[T], tol: f64) -> Result<TightEdges<T>> {
    let (beta, u) = max_cycle_mean(g, w)?;
    let mut tight = Vec::new();
    let mut limited = false;
    for (i, j) in g.edges() {
        let r = w[i].clone() - beta.clone() + u[i].clone() - u[j].clone();
        if r.is_tie_zero(tol) {
            tight.push((i, j));
            if !T::EXACT && !r.is_zero() {
                limited = true;
            }
        }
    }
    Ok((beta, u, tight, limited))
}

/// Face subshift of an arbitrary graph with node weights; `block` names the
/// symbol word of a node for the attached Parry measures.
pub fn face_of_graph<T: Scalar>(
    g: &Digraph,
    w: &[T],
    tol: f64,
    block: impl Fn(usize) -> Vec<usize>,
) -> Result<FaceSubshift<T>> {
    let (beta, u, tight_edges, limited) = tight_edges(g, w, tol)?;
    let tight = Digraph::with_edges(g.len(), tight_edges.iter().copied());
    let mut components = Vec::new();
    for comp in tight.sccs() {
        if !tight.is_nontrivial(&comp) {
            continue;
        }
        let sub = tight.induced(&comp);
        let transition = sub.to_matrix();
        let blocks = comp.iter().map(|&s| block(s)).collect();
        let (parry, h_top) = parry_of_matrix(comp.clone(), blocks, &transition)?;
        components.push(FaceComponent {
            is_singleton_orbit: sub.is_single_cycle(),
            h_top: if sub.is_single_cycle() { 0.0 } else { h_top },
            states: comp,
            transition,
            parry,
        });
    }
    if components.is_empty() {
        return Err(Error::numeric("tight subgraph has no cycle", 0.0));
    }
    let hs: Vec<f64> = components.iter().map(|c| c.h_top).collect();
    let max_entropy_ids = entropy_argmax(&hs);
    Ok(FaceSubshift {
        beta,
        potentials: u,
        tight_edges,
        components,
        max_entropy_ids,
        tolerance_limited: limited,
    })
}
