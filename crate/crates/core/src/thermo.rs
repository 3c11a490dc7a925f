//! Transfer-matrix thermodynamics of locally constant potentials.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::max_face::max_cycle_mean;
use crate::numeric::Scalar;
use crate::perron::{perron_data, PerronData};
use crate::potential::Potential;
use crate::sft::Sft;

const STOCHASTIC_TOL: f64 = 1e-9;

/// A stationary Markov measure on a set of blocks.
///
/// `blocks[i]` is the base-alphabet word labelling state `i`; `states[i]` is
/// its id in the recoding the measure was built on.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct MarkovMeasure {
    pub states: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
    pub p: Vec<f64>,
    pub transition: Vec<Vec<f64>>,
}

impl MarkovMeasure {
    pub fn new(states: Vec<usize>, blocks: Vec<Vec<usize>>, p: Vec<f64>, transition: Vec<Vec<f64>>) -> Result<Self> {
        let n = states.len();
        if n == 0 || blocks.len() != n || p.len() != n || transition.len() != n {
            return Err(Error::invalid("inconsistent Markov measure dimensions"));
        }
        if transition.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("transition matrix is not square"));
        }
        let bad = |x: f64| !(x >= 0.0) || !x.is_finite();
        if p.iter().copied().any(bad) || transition.iter().flatten().copied().any(bad) {
            return Err(Error::invalid("probabilities must be finite and nonnegative"));
        }
        if (p.iter().sum::<f64>() - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::invalid("probability vector does not sum to one"));
        }
        for row in &transition {
            if (row.iter().sum::<f64>() - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::invalid("transition matrix is not row-stochastic"));
            }
        }
        let mu = MarkovMeasure { states, blocks, p, transition };
        if mu.stationarity_residual() > STOCHASTIC_TOL {
            return Err(Error::invalid("probability vector is not stationary"));
        }
        Ok(mu)
    }

    /// Markov measure of the Perron data of a nonnegative matrix:
    /// `P_ij = M_ij v_j / (λ v_i)`, `p_i = u_i v_i`.
    pub(crate) fn from_perron(states: Vec<usize>, blocks: Vec<Vec<usize>>, m: &[Vec<f64>], data: &PerronData) -> Self {
        let n = m.len();
        let v = &data.right;
        let mut p: Vec<f64> = (0..n).map(|i| data.left[i] * v[i]).collect();
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= s);
        let transition = (0..n)
            .map(|i| {
                let mut row: Vec<f64> = (0..n).map(|j| m[i][j] * v[j] / (data.lambda * v[i])).collect();
                let rs: f64 = row.iter().sum();
                row.iter_mut().for_each(|x| *x /= rs);
                row
            })
            .collect();
        MarkovMeasure { states, blocks, p, transition }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `max_j |(pP)_j − p_j|`.
    pub fn stationarity_residual(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|j| {
                let s: f64 = (0..n).map(|i| self.p[i] * self.transition[i][j]).sum();
                (s - self.p[j]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Mass of the first symbol: `p(a) = Σ_{blocks starting with a} p_i`.
    pub fn symbol_marginal(&self, d: usize) -> Vec<f64> {
        let mut out = vec![0.0; d];
        for (b, &pi) in self.blocks.iter().zip(&self.p) {
            out[b[0]] += pi;
        }
        out
    }

    /// Total mass carried by the listed states (ids as in `states`).
    pub fn mass_of(&self, ids: &[usize]) -> f64 {
        self.states
            .iter()
            .zip(&self.p)
            .filter(|(s, _)| ids.contains(s))
            .map(|(_, p)| p)
            .sum()
    }
}

/// `h = −Σ_i p_i Σ_j P_ij log P_ij`, with `0 log 0 = 0`.
pub fn markov_entropy(mu: &MarkovMeasure) -> f64 {
    let mut h = 0.0;
    for (pi, row) in mu.p.iter().zip(&mu.transition) {
        for &q in row {
            if q > 0.0 {
                h -= pi * q * q.ln();
            }
        }
    }
    h
}

/// `∫Φ dμ`. Potentials on longer windows than the measure's blocks are
/// integrated over the extended paths.
pub fn markov_rotation_vector<T: Scalar>(mu: &MarkovMeasure, phi: &Potential<T>) -> Result<Vec<f64>> {
    let k = phi.k();
    let mut acc = vec![0.0; phi.m()];
    let mut word = Vec::new();
    for i in 0..mu.len() {
        word.clear();
        word.extend_from_slice(&mu.blocks[i]);
        integrate_paths(mu, phi, k, i, mu.p[i], &mut word, &mut acc)?;
    }
    Ok(acc)
}

fn integrate_paths<T: Scalar>(
    mu: &MarkovMeasure,
    phi: &Potential<T>,
    k: usize,
    state: usize,
    weight: f64,
    word: &mut Vec<usize>,
    acc: &mut [f64],
) -> Result<()> {
    if weight == 0.0 {
        return Ok(());
    }
    if word.len() >= k {
        let v = phi
            .value_of_block(&word[..k])
            .ok_or_else(|| Error::invalid("measure charges a block outside the potential's shift"))?;
        for (a, x) in acc.iter_mut().zip(v) {
            *a += weight * x.to_f64();
        }
        return Ok(());
    }
    for (j, &q) in mu.transition[state].iter().enumerate() {
        if q > 0.0 {
            let last = *mu.blocks[j].last().expect("nonempty block");
            word.push(last);
            integrate_paths(mu, phi, k, j, weight * q, word, acc)?;
            word.pop();
        }
    }
    Ok(())
}

/// Parry measure of an irreducible 0/1 matrix whose states carry `blocks`.
pub(crate) fn parry_of_matrix(states: Vec<usize>, blocks: Vec<Vec<usize>>, a: &[Vec<u8>]) -> Result<(MarkovMeasure, f64)> {
    let m: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let data = perron_data(&m)?;
    Ok((MarkovMeasure::from_perron(states, blocks, &m, &data), data.entropy()))
}

/// Measure of maximal entropy of an irreducible SFT.
pub fn parry_measure(sft: &Sft) -> Result<MarkovMeasure> {
    let d = sft.d();
    parry_of_matrix((0..d).collect(), (0..d).map(|a| vec![a]).collect(), sft.transition()).map(|r| r.0)
}

/// Reduced edge weights `w_i − β + u_i − u_j ≤ 0` of a scalar potential on
/// its recoded graph. Exponentiating `t` times these keeps every entry in
/// `[0, 1]` with tight edges exactly `1`.
#[derive(Clone, Debug)]
pub struct ReducedWeights {
    pub beta: f64,
    pub edges: Vec<(usize, usize, f64)>,
    n: usize,
}

impl ReducedWeights {
    pub fn new<T: Scalar>(phi: &Potential<T>) -> Result<Self> {
        if phi.m() != 1 {
            return Err(Error::invalid("transfer matrices need a scalar potential"));
        }
        Self::from_graph(phi.recoded().graph(), &phi.scalar_values())
    }

    /// Reduced weights of node weights `w` charged on edge sources of `g`.
    pub fn from_graph<T: Scalar>(g: &Digraph, w: &[T]) -> Result<Self> {
        let (beta, u) = max_cycle_mean(g, w)?;
        let edges = g
            .edges()
            .map(|(i, j)| {
                let r = w[i].clone() - beta.clone() + u[i].clone() - u[j].clone();
                (i, j, r.to_f64().min(0.0))
            })
            .collect();
        Ok(ReducedWeights {
            beta: beta.to_f64(),
            edges,
            n: g.len(),
        })
    }

    /// `M̂(t)`; errors when an admissible edge underflows to zero.
    pub fn matrix(&self, t: f64) -> Result<Vec<Vec<f64>>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for &(i, j, r) in &self.edges {
            let x = (t * r).exp();
            if x == 0.0 {
                return Err(Error::Underflow { t });
            }
            m[i][j] = x;
        }
        Ok(m)
    }
}

fn check_t(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::invalid("inverse temperature must be finite"));
    }
    Ok(())
}

/// `P_top(tφ)`.
pub fn pressure<T: Scalar>(phi: &Potential<T>, t: f64) -> Result<f64> {
    check_t(t)?;
    let rw = ReducedWeights::new(phi)?;
    pressure_reduced(&rw, t)
}

pub fn pressure_reduced(rw: &ReducedWeights, t: f64) -> Result<f64> {
    let data = perron_data(&rw.matrix(t)?)?;
    Ok(data.lambda.ln() + t * rw.beta)
}

/// Equilibrium state of `tφ` as a Markov measure on the recoded states.
pub fn equilibrium_markov<T: Scalar>(phi: &Potential<T>, t: f64) -> Result<MarkovMeasure> {
    check_t(t)?;
    let rw = ReducedWeights::new(phi)?;
    let (mu, _) = equilibrium_reduced(phi, &rw, t)?;
    Ok(mu)
}

/// Equilibrium measure and pressure from precomputed reduced weights.
pub fn equilibrium_reduced<T: Scalar>(phi: &Potential<T>, rw: &ReducedWeights, t: f64) -> Result<(MarkovMeasure, f64)> {
    let m = rw.matrix(t)?;
    let data = perron_data(&m)?;
    let n = m.len();
    let mu = MarkovMeasure::from_perron((0..n).collect(), phi.recoded().states().to_vec(), &m, &data);
    Ok((mu, data.lambda.ln() + t * rw.beta))
}

/// One row of a temperature sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub t: f64,
    pub pressure: f64,
    pub entropy: f64,
    pub rv: Vec<f64>,
}

/// Pressure, entropy and rotation vector of `μ_{tφ}` for each `t`.
/// `rv_of` is integrated against each equilibrium measure.
pub fn t_sweep<T: Scalar>(phi: &Potential<T>, rv_of: &Potential<T>, ts: &[f64]) -> Result<Vec<SweepRow>> {
    let rw = ReducedWeights::new(phi)?;
    ts.par_iter()
        .map(|&t| {
            check_t(t)?;
            let (mu, p) = equilibrium_reduced(phi, &rw, t)?;
            Ok(SweepRow {
                t,
                pressure: p,
                entropy: markov_entropy(&mu),
                rv: markov_rotation_vector(&mu, rv_of)?,
            })
        })
        .collect()
}
