//! Localized entropy on rotation sets of planar potentials.
//!
//! In the interior `𝓗(w)` is the entropy of the equilibrium state of `v·Φ`
//! whose rotation vector is `w`, found by minimizing the convex dual
//! `P(v·Φ) − v·w`. On a segment face it is the concave envelope of the
//! curves of the face's transitive components.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{rotation_set_by_support, support_orbit};
use crate::graph::Digraph;
use crate::max_face::{face_of_graph, max_cycle_mean, maximizing_subshift};
use crate::numeric::{dot, Scalar, DEFAULT_TOL};
use crate::orbits::{birkhoff_average, orbits_in_subgraph};
use crate::perron::perron_data;
use crate::potential::Potential;
use crate::thermo::{markov_entropy, MarkovMeasure, ReducedWeights};

/// Interior points must keep this distance from every facet.
pub const INTERIOR_MARGIN: f64 = 1e-6;
/// Dual sweeps stop at `|v| = V_MAX`.
pub const V_MAX: f64 = 50.0;
/// Most face orbits listed as kink annotations.
pub const ORBIT_MARK_CAP: usize = 10_000;
const NEWTON_TOL: f64 = 1e-11;
const NEWTON_MAX_ITER: usize = 100;

/// Equilibrium state of node weights `w` on an irreducible graph.
struct GraphEquilibrium {
    p: Vec<f64>,
    entropy: f64,
    pressure: f64,
}

fn graph_equilibrium(g: &Digraph, w: &[f64]) -> Result<GraphEquilibrium> {
    let rw = ReducedWeights::from_graph(g, w)?;
    let m = rw.matrix(1.0)?;
    let data = perron_data(&m)?;
    let n = g.len();
    let mu = MarkovMeasure::from_perron((0..n).collect(), vec![vec![0]; n], &m, &data);
    Ok(GraphEquilibrium {
        entropy: markov_entropy(&mu),
        pressure: data.lambda.ln() + rw.beta,
        p: mu.p,
    })
}

/// Result of an interior evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct InteriorPoint {
    pub h: f64,
    /// Dual vector with `rv(μ_{v·Φ}) = w`.
    pub v: Vec<f64>,
    pub pressure: f64,
    /// `max |rv − w|` at the returned `v`.
    pub residual: f64,
    pub iterations: usize,
}

/// Dual objective and gradient in the coordinates `z` of `v = Σ z_i b_i`.
struct Dual<'a> {
    g: &'a Digraph,
    values: Vec<[f64; 2]>,
    w: [f64; 2],
    basis: Vec<[f64; 2]>,
}

struct DualEval {
    value: f64,
    grad: Vec<f64>,
    rv: [f64; 2],
    eq: GraphEquilibrium,
}

impl Dual<'_> {
    fn v_of(&self, z: &[f64]) -> [f64; 2] {
        let mut v = [0.0; 2];
        for (zi, b) in z.iter().zip(&self.basis) {
            v[0] += zi * b[0];
            v[1] += zi * b[1];
        }
        v
    }

    fn eval(&self, z: &[f64]) -> Result<DualEval> {
        let v = self.v_of(z);
        let weights: Vec<f64> = self.values.iter().map(|x| v[0] * x[0] + v[1] * x[1]).collect();
        let eq = graph_equilibrium(self.g, &weights)?;
        let mut rv = [0.0; 2];
        for (p, x) in eq.p.iter().zip(&self.values) {
            rv[0] += p * x[0];
            rv[1] += p * x[1];
        }
        let grad = self
            .basis
            .iter()
            .map(|b| b[0] * (rv[0] - self.w[0]) + b[1] * (rv[1] - self.w[1]))
            .collect();
        Ok(DualEval {
            value: eq.pressure - v[0] * self.w[0] - v[1] * self.w[1],
            grad,
            rv,
            eq,
        })
    }

    /// Hessian of the dual by central differences of the gradient.
    fn hessian(&self, z: &[f64]) -> Result<Vec<Vec<f64>>> {
        let k = z.len();
        let step = 1e-5 * z.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        let mut h = vec![vec![0.0; k]; k];
        for j in 0..k {
            let mut zp = z.to_vec();
            let mut zm = z.to_vec();
            zp[j] += step;
            zm[j] -= step;
            let gp = self.eval(&zp)?.grad;
            let gm = self.eval(&zm)?.grad;
            for i in 0..k {
                h[i][j] = (gp[i] - gm[i]) / (2.0 * step);
            }
        }
        for i in 0..k {
            for j in 0..i {
                let avg = 0.5 * (h[i][j] + h[j][i]);
                h[i][j] = avg;
                h[j][i] = avg;
            }
        }
        Ok(h)
    }
}

/// Solve a symmetric system of size 1 or 2; `None` unless positive definite.
fn solve_spd(h: &[Vec<f64>], g: &[f64]) -> Option<Vec<f64>> {
    match g.len() {
        1 => (h[0][0] > 0.0).then(|| vec![g[0] / h[0][0]]),
        2 => {
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            (h[0][0] > 0.0 && det > 0.0).then(|| {
                vec![
                    (h[1][1] * g[0] - h[0][1] * g[1]) / det,
                    (h[0][0] * g[1] - h[1][0] * g[0]) / det,
                ]
            })
        }
        _ => None,
    }
}

fn to_pair<T: Scalar>(v: &[T]) -> [f64; 2] {
    [v[0].to_f64(), v[1].to_f64()]
}

fn check_planar<T: Scalar>(phi: &Potential<T>) -> Result<()> {
    if phi.m() != 2 {
        return Err(Error::UnsupportedDimension(phi.m()));
    }
    Ok(())
}

/// `𝓗(w)` for `w` in the relative interior of `Rot(Φ)`.
pub fn localized_entropy_interior<T: Scalar>(phi: &Potential<T>, w: &[f64]) -> Result<InteriorPoint> {
    check_planar(phi)?;
    if w.len() != 2 || !w.iter().all(|x| x.is_finite()) {
        return Err(Error::invalid("w must be a finite point of the plane"));
    }
    let w = [w[0], w[1]];
    let (rot, _) = rotation_set_by_support(phi)?;
    let hull = rot.explicit().expect("planar hulls are explicit");
    let verts: Vec<[f64; 2]> = hull.vertices.iter().map(|v| to_pair(v)).collect();
    let outside = || Error::OutOfDomain(format!("({}, {}) is not interior to the rotation set", w[0], w[1]));
    let basis: Vec<[f64; 2]> = match hull.affine_dim {
        0 => {
            if (verts[0][0] - w[0]).hypot(verts[0][1] - w[1]) > DEFAULT_TOL {
                return Err(outside());
            }
            // every invariant measure has this rotation vector
            let h = crate::perron::spectral_radius_01(&phi.recoded().transition())?.ln();
            let p = graph_equilibrium(phi.recoded().graph(), &vec![0.0; phi.recoded().num_states()])?;
            return Ok(InteriorPoint {
                h,
                v: vec![0.0, 0.0],
                pressure: p.pressure,
                residual: 0.0,
                iterations: 0,
            });
        }
        1 => {
            let (a, b) = (verts[0], verts[1]);
            let e = [b[0] - a[0], b[1] - a[1]];
            let len = e[0].hypot(e[1]);
            let u = [e[0] / len, e[1] / len];
            let off = (w[0] - a[0]) * u[1] - (w[1] - a[1]) * u[0];
            let along = (w[0] - a[0]) * u[0] + (w[1] - a[1]) * u[1];
            if off.abs() > DEFAULT_TOL || along < INTERIOR_MARGIN || along > len - INTERIOR_MARGIN {
                return Err(outside());
            }
            vec![u]
        }
        _ => {
            for f in &hull.facets {
                let n = to_pair(&f.normal);
                let gap = (f.offset.to_f64() - n[0] * w[0] - n[1] * w[1]) / n[0].hypot(n[1]);
                if gap < INTERIOR_MARGIN {
                    return Err(outside());
                }
            }
            vec![[1.0, 0.0], [0.0, 1.0]]
        }
    };
    let rec = phi.recoded();
    let dual = Dual {
        g: rec.graph(),
        values: (0..rec.num_states()).map(|s| to_pair(phi.value(s))).collect(),
        w,
        basis,
    };
    let k = dual.basis.len();
    let mut z = vec![0.0; k];
    let mut cur = dual.eval(&z)?;
    for it in 0..NEWTON_MAX_ITER {
        let gnorm = cur.grad.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if gnorm < NEWTON_TOL {
            let v = dual.v_of(&z);
            return Ok(InteriorPoint {
                h: cur.eq.entropy,
                v: v.to_vec(),
                pressure: cur.eq.pressure,
                residual: (cur.rv[0] - w[0]).abs().max((cur.rv[1] - w[1]).abs()),
                iterations: it,
            });
        }
        let hess = dual.hessian(&z)?;
        let step = solve_spd(&hess, &cur.grad).unwrap_or_else(|| cur.grad.clone());
        let slope: f64 = step.iter().zip(&cur.grad).map(|(a, b)| a * b).sum();
        // backtracking on the convex dual
        let mut lambda = 1.0;
        loop {
            let trial: Vec<f64> = z.iter().zip(&step).map(|(a, b)| a - lambda * b).collect();
            match dual.eval(&trial) {
                Ok(next) if next.value <= cur.value - 1e-4 * lambda * slope || lambda < 1e-12 => {
                    z = trial;
                    cur = next;
                    break;
                }
                Ok(_) | Err(Error::Underflow { .. }) => lambda *= 0.5,
                Err(e) => return Err(e),
            }
            if lambda < 1e-12 {
                return Err(Error::numeric("line search stalled", gnorm));
            }
        }
    }
    let residual = cur.grad.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    Err(Error::numeric("Newton iteration did not converge", residual))
}

/// A sampled point of an entropy curve on a face.
#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct CurvePoint {
    /// Position along the face, `0` at the first endpoint and `1` at the second.
    pub s: f64,
    pub w: [f64; 2],
    pub h: f64,
}

/// Samples of `𝓗` restricted to one component of `X_F`.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentCurve {
    pub component: usize,
    /// The component has a single rotation vector.
    pub is_point: bool,
    pub points: Vec<CurvePoint>,
    /// Exact `d𝓗/ds` at each point where finite.
    pub slopes: Vec<Option<f64>>,
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PieceKind {
    Arc { component: usize },
    Bridge,
}

/// One piece of the concave envelope between consecutive hull nodes.
#[derive(Clone, Debug, Serialize)]
pub struct EnvelopePiece {
    pub kind: PieceKind,
    pub start: CurvePoint,
    pub end: CurvePoint,
    pub start_slope: Option<f64>,
    pub end_slope: Option<f64>,
}

impl EnvelopePiece {
    fn eval(&self, s: f64) -> f64 {
        let (a, b) = (&self.start, &self.end);
        let ds = b.s - a.s;
        if ds <= 0.0 {
            return a.h.max(b.h);
        }
        let x = ((s - a.s) / ds).clamp(0.0, 1.0);
        match (self.kind, self.start_slope, self.end_slope) {
            (PieceKind::Arc { .. }, Some(m0), Some(m1)) => {
                let (x2, x3) = (x * x, x * x * x);
                (2.0 * x3 - 3.0 * x2 + 1.0) * a.h
                    + (x3 - 2.0 * x2 + x) * ds * m0
                    + (-2.0 * x3 + 3.0 * x2) * b.h
                    + (x3 - x2) * ds * m1
            }
            _ => a.h + x * (b.h - a.h),
        }
    }
}

/// Rotation vector of an elementary orbit lying on the face.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitMark {
    pub segment: String,
    pub w: [f64; 2],
    pub s: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyCurve {
    pub alpha: [f64; 2],
    /// `α·w` on the face.
    pub support: f64,
    /// Face endpoints at `s = 0` and `s = 1`.
    pub endpoints: [[f64; 2]; 2],
    pub endpoints_exact: [Vec<String>; 2],
    pub face_entropy: f64,
    /// Envelope on a uniform grid in `s`.
    pub samples: Vec<CurvePoint>,
    pub component_curves: Vec<ComponentCurve>,
    pub envelope: Vec<EnvelopePiece>,
    pub orbit_marks: Vec<OrbitMark>,
    pub warnings: Vec<String>,
}

impl EntropyCurve {
    pub fn w_at(&self, s: f64) -> [f64; 2] {
        let [a, b] = self.endpoints;
        [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]
    }

    /// Euclidean length of the face.
    pub fn length(&self) -> f64 {
        let [a, b] = self.endpoints;
        (b[0] - a[0]).hypot(b[1] - a[1])
    }

    pub fn piece_at(&self, s: f64) -> usize {
        let i = self.envelope.partition_point(|p| p.end.s < s);
        i.min(self.envelope.len() - 1)
    }

    /// The envelope `𝓗|F` at `s ∈ [0, 1]`.
    pub fn eval(&self, s: f64) -> f64 {
        self.envelope[self.piece_at(s)].eval(s)
    }

    /// `s,w_x,w_y,h_envelope,component_id_or_bridge`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,w_x,w_y,h_envelope,component_id_or_bridge\n");
        for p in &self.samples {
            let owner = match self.envelope[self.piece_at(p.s)].kind {
                PieceKind::Arc { component } => component.to_string(),
                PieceKind::Bridge => "bridge".to_string(),
            };
            out.push_str(&format!("{},{},{},{},{}\n", p.s, p.w[0], p.w[1], p.h, owner));
        }
        out
    }
}

/// A hull candidate: owner component and position in its curve.
#[derive(Clone, Copy)]
struct Node {
    point: CurvePoint,
    slope: Option<f64>,
    owner: usize,
    seq: usize,
}

/// `𝓗` on the face of `Rot(Φ)` exposed by `α`, with `n` dual samples per
/// component and an `n`-point grid for `samples`.
pub fn face_entropy_curve<T: Scalar>(phi: &Potential<T>, alpha: &[T], n: usize) -> Result<EntropyCurve> {
    check_planar(phi)?;
    if alpha.len() != 2 || alpha.iter().all(num_traits::Zero::is_zero) {
        return Err(Error::invalid("face direction must be a nonzero planar vector"));
    }
    if n < 2 {
        return Err(Error::invalid("at least two samples are needed"));
    }
    let rec = phi.recoded();
    let tau = vec![-alpha[1].clone(), alpha[0].clone()];
    let neg_tau: Vec<T> = tau.iter().map(|x| -x.clone()).collect();
    let a = birkhoff_average(&support_orbit(phi, alpha, &neg_tau)?, phi)?;
    let b = birkhoff_average(&support_orbit(phi, alpha, &tau)?, phi)?;
    let face = maximizing_subshift(&phi.scalarize(alpha)?)?;
    let ta = dot(&tau, &a);
    let span = dot(&tau, &b) - ta.clone();
    if span.is_tie_zero(DEFAULT_TOL) {
        let pt: Vec<String> = a.iter().map(Scalar::to_text).collect();
        return Err(Error::DegenerateFace(format!(
            "the face is the vertex ({}); its entropy is h_top(X_F) = {}",
            pt.join(", "),
            face.h_top()
        )));
    }
    let (a_f, b_f) = (to_pair(&a), to_pair(&b));
    let span_f = span.to_f64();
    // s is affine in x = τ·w with dx/ds = span, so d𝓗/ds = −v·span
    let s_of = |x: f64| (x - ta.to_f64()) / span_f;
    let w_of = |s: f64| [a_f[0] + s * (b_f[0] - a_f[0]), a_f[1] + s * (b_f[1] - a_f[1])];
    let mut warnings = Vec::new();
    if face.tolerance_limited {
        warnings.push("tolerance-limited tight edges".to_string());
    }
    let samples_per = if n.is_multiple_of(2) { n + 1 } else { n };
    let theta_max = V_MAX.atan();
    let vs: Vec<f64> = (0..samples_per)
        .map(|j| (-theta_max + 2.0 * theta_max * j as f64 / (samples_per - 1) as f64).tan())
        .collect();
    let curves: Vec<(ComponentCurve, Vec<String>)> = face
        .components
        .par_iter()
        .enumerate()
        .map(|(c, comp)| -> Result<(ComponentCurve, Vec<String>)> {
            let g = Digraph::from_matrix(&comp.transition);
            let psi: Vec<T> = comp.states.iter().map(|&s| dot(&tau, phi.value(s))).collect();
            let neg: Vec<T> = psi.iter().map(|x| -x.clone()).collect();
            let (hi, _) = max_cycle_mean(&g, &psi)?;
            let (lo_neg, _) = max_cycle_mean(&g, &neg)?;
            let lo = -lo_neg;
            let point = |x: &T, h: f64| {
                let s = s_of(x.to_f64());
                CurvePoint { s, w: w_of(s), h }
            };
            if (hi.clone() - lo.clone()).is_tie_zero(DEFAULT_TOL) {
                return Ok((
                    ComponentCurve {
                        component: c,
                        is_point: true,
                        points: vec![point(&hi, comp.h_top)],
                        slopes: vec![None],
                    },
                    Vec::new(),
                ));
            }
            let block = |i: usize| rec.block(comp.states[i]).to_vec();
            let h_lo = face_of_graph(&g, &neg, DEFAULT_TOL, block)?.h_top();
            let h_hi = face_of_graph(&g, &psi, DEFAULT_TOL, block)?.h_top();
            let psi_f: Vec<f64> = psi.iter().map(Scalar::to_f64).collect();
            let mut points = vec![point(&lo, h_lo)];
            let mut slopes = vec![None];
            let mut notes = Vec::new();
            for &v in &vs {
                let weights: Vec<f64> = psi_f.iter().map(|x| v * x).collect();
                match graph_equilibrium(&g, &weights) {
                    Ok(eq) => {
                        let x: f64 = eq.p.iter().zip(&psi_f).map(|(p, y)| p * y).sum();
                        let s = s_of(x);
                        points.push(CurvePoint { s, w: w_of(s), h: eq.entropy });
                        slopes.push(Some(-v * span_f));
                    }
                    Err(Error::Underflow { .. }) => notes.push(format!("component {c}: sample v = {v} underflowed")),
                    Err(e) => return Err(e),
                }
            }
            points.push(point(&hi, h_hi));
            slopes.push(None);
            Ok((
                ComponentCurve {
                    component: c,
                    is_point: false,
                    points,
                    slopes,
                },
                notes,
            ))
        })
        .collect::<Result<_>>()?;
    let mut component_curves = Vec::new();
    for (cc, notes) in curves {
        warnings.extend(notes);
        component_curves.push(cc);
    }
    let envelope = upper_envelope(&component_curves);
    let grid = n.max(2);
    let mut curve = EntropyCurve {
        alpha: to_pair(alpha),
        support: face.beta.to_f64(),
        endpoints: [a_f, b_f],
        endpoints_exact: [a.iter().map(Scalar::to_text).collect(), b.iter().map(Scalar::to_text).collect()],
        face_entropy: face.h_top(),
        samples: Vec::new(),
        component_curves,
        envelope,
        orbit_marks: Vec::new(),
        warnings,
    };
    curve.samples = (0..grid)
        .map(|j| {
            let s = j as f64 / (grid - 1) as f64;
            CurvePoint { s, w: w_of(s), h: curve.eval(s) }
        })
        .collect();
    let tight = face.tight_graph(rec.num_states());
    match orbits_in_subgraph(rec, &tight, ORBIT_MARK_CAP) {
        Ok(orbits) => {
            for o in orbits {
                let rv = to_pair(&birkhoff_average(&o, phi)?);
                let s = s_of(dot(&to_pair(&tau), &rv));
                curve.orbit_marks.push(OrbitMark {
                    segment: phi.base().word(&o.segment),
                    w: rv,
                    s,
                });
            }
        }
        Err(Error::ResourceLimit(_)) => curve
            .warnings
            .push(format!("more than {ORBIT_MARK_CAP} face orbits; kinks are not annotated")),
        Err(e) => return Err(e),
    }
    Ok(curve)
}

fn cross(o: &CurvePoint, a: &CurvePoint, b: &CurvePoint) -> f64 {
    (a.s - o.s) * (b.h - o.h) - (a.h - o.h) * (b.s - o.s)
}

/// Upper concave hull of all component points, split into arcs (runs of
/// consecutive points of one component) and bridges.
fn upper_envelope(curves: &[ComponentCurve]) -> Vec<EnvelopePiece> {
    let mut nodes: Vec<Node> = curves
        .iter()
        .flat_map(|c| {
            c.points.iter().zip(&c.slopes).enumerate().map(move |(i, (p, m))| Node {
                point: *p,
                slope: *m,
                owner: c.component,
                seq: i,
            })
        })
        .collect();
    nodes.sort_by(|x, y| x.point.s.total_cmp(&y.point.s).then(y.point.h.total_cmp(&x.point.h)));
    // keep the highest point among nearly equal abscissae
    let mut merged: Vec<Node> = Vec::new();
    for q in nodes {
        match merged.last_mut() {
            Some(last) if (q.point.s - last.point.s).abs() <= 1e-12 => {
                if q.point.h > last.point.h {
                    *last = q;
                }
            }
            _ => merged.push(q),
        }
    }
    let mut hull: Vec<Node> = Vec::new();
    for q in merged {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2].point, &hull[hull.len() - 1].point, &q.point) >= 0.0 {
            hull.pop();
        }
        hull.push(q);
    }
    if hull.len() == 1 {
        hull.push(hull[0]);
    }
    hull.windows(2)
        .map(|pair| {
            let (u, v) = (pair[0], pair[1]);
            let kind = if u.owner == v.owner && v.seq == u.seq + 1 {
                PieceKind::Arc { component: u.owner }
            } else {
                PieceKind::Bridge
            };
            EnvelopePiece {
                kind,
                start: u.point,
                end: v.point,
                start_slope: u.slope,
                end_slope: v.slope,
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Kink {
    pub s: f64,
    pub w: [f64; 2],
    pub slope_left: f64,
    pub slope_right: f64,
    /// Nearest elementary-orbit rotation vector on the face.
    pub nearest_orbit: Option<String>,
    pub orbit_distance: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KinkReport {
    pub h_step: f64,
    pub threshold: f64,
    /// Junctions of the envelope that were tested.
    pub candidates: Vec<f64>,
    pub kinks: Vec<Kink>,
}

/// One-sided difference quotients at every junction of the envelope inside
/// `[h_step, 1 − h_step]`; a jump above `10·h_step` is a kink.
pub fn differentiability_scan(curve: &EntropyCurve, h_step: f64) -> Result<KinkReport> {
    if !(h_step > 0.0 && h_step < 0.5) {
        return Err(Error::invalid("h_step must lie in (0, 1/2)"));
    }
    let threshold = 10.0 * h_step;
    let mut candidates = Vec::new();
    let mut kinks = Vec::new();
    for pair in curve.envelope.windows(2) {
        let (l, r) = (&pair[0], &pair[1]);
        let smooth = matches!((l.kind, r.kind), (PieceKind::Arc { component: a }, PieceKind::Arc { component: b }) if a == b);
        let s = l.end.s;
        if smooth || s < h_step || s > 1.0 - h_step {
            continue;
        }
        candidates.push(s);
        let e = curve.eval(s);
        let slope_left = (e - curve.eval(s - h_step)) / h_step;
        let slope_right = (curve.eval(s + h_step) - e) / h_step;
        if (slope_right - slope_left).abs() > threshold {
            let w = curve.w_at(s);
            let nearest = curve
                .orbit_marks
                .iter()
                .map(|o| (o, (o.w[0] - w[0]).hypot(o.w[1] - w[1])))
                .min_by(|x, y| x.1.total_cmp(&y.1));
            kinks.push(Kink {
                s,
                w,
                slope_left,
                slope_right,
                nearest_orbit: nearest.map(|(o, _)| o.segment.clone()),
                orbit_distance: nearest.map(|(_, d)| d),
            });
        }
    }
    Ok(KinkReport {
        h_step,
        threshold,
        candidates,
        kinks,
    })
}
