//! Zero-temperature classification of scalar potentials.
//!
//! A potential is sorted into one of four cases by the structure of the
//! maximal-entropy part of its maximizing face subshift, and the limit of
//! the equilibrium states is written as a convex combination of the Parry
//! measures of those components.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{face_in_direction, fingerprint_from_values, FaceFingerprint};
use crate::max_face::{max_cycle_mean, maximizing_subshift, FaceSubshift};
use crate::numeric::{HpFloat, Rational, Scalar};
use crate::orbits::{orbits_in_subgraph, ElementaryOrbit};
use crate::perron::perron_hp;
use crate::potential::{cohomology_test, Potential};
use crate::sft::is_transitive;
use crate::thermo::{equilibrium_reduced, markov_entropy, markov_rotation_vector, MarkovMeasure, ReducedWeights};

/// Largest alphabet for which symbol permutations are searched.
pub const SYMMETRY_MAX_ALPHABET: usize = 8;
/// Mantissa cap for the high precision equilibrium computations.
pub const MAX_BITS: usize = 8192;
/// Successive coefficient vectors closer than this end the schedule.
pub const CONVERGED_DELTA: f64 = 1e-12;
/// Final deltas above this are reported as unconverged.
pub const UNCONVERGED_DELTA: f64 = 1e-6;
/// Boundary mass above this at the last step is flagged.
pub const BOUNDARY_MASS_TOL: f64 = 1e-3;
/// Largest number of face orbits listed in a fingerprint.
pub const FACE_ORBIT_CAP: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZtCase {
    /// The limit is a single periodic orbit measure.
    VertexPeriodic,
    /// The limit is the Parry measure of one transitive component.
    UniqueTransitive,
    /// The limit is a convex combination over several components.
    MultiComponent,
    /// `φ` is cohomologous to a constant; the limit is the measure of maximal entropy.
    CohomologousToConstant,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    /// Exact by a symbol permutation preserving `φ` up to cohomology.
    Symmetry,
    Numeric { t_max: f64, est_error: f64, converged: bool },
}

#[derive(Clone, Debug, Serialize)]
pub struct Coefficients {
    pub values: Vec<f64>,
    /// Exact rational values, when known.
    #[serde(skip)]
    pub exact: Option<Vec<Rational>>,
    pub provenance: Provenance,
    /// Mass outside the listed components at the last temperature.
    pub boundary_mass: f64,
    pub warnings: Vec<String>,
}

impl Coefficients {
    fn exact(values: Vec<Rational>, provenance: Provenance) -> Self {
        Coefficients {
            values: values.iter().map(Scalar::to_f64).collect(),
            exact: Some(values),
            provenance,
            boundary_mass: 0.0,
            warnings: Vec::new(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

/// One element of `𝓜_F`.
#[derive(Clone, Debug, Serialize)]
pub struct LimitComponent {
    /// Index into `FaceSubshift::components`.
    pub face_id: usize,
    pub measure: MarkovMeasure,
    pub entropy: f64,
}

#[derive(Clone, Debug)]
pub struct ZtClassification<T: Scalar> {
    pub case: ZtCase,
    /// Orbits attaining `β`, indexing the orbit list the classification was
    /// run against (the face orbits themselves when none was supplied).
    /// `None` when the face has more than `FACE_ORBIT_CAP` elementary orbits.
    pub fingerprint: Option<FaceFingerprint<T>>,
    /// The orbits listed in the fingerprint, in order.
    pub fingerprint_orbits: Vec<ElementaryOrbit>,
    pub face: FaceSubshift<T>,
    pub components: Vec<LimitComponent>,
    pub coefficients: Option<Coefficients>,
    pub entropy_of_limit: f64,
    /// The constant `K` with `φ ~ K`, for the cohomologous case.
    pub cohomology_constant: Option<T>,
    pub warnings: Vec<String>,
}

impl<T: Scalar> ZtClassification<T> {
    pub fn beta(&self) -> &T {
        &self.face.beta
    }

    /// Rotation number of the limit as a convex sum of component measures.
    pub fn limit_average(&self, phi: &Potential<T>) -> Result<Option<f64>> {
        let Some(c) = &self.coefficients else { return Ok(None) };
        let mut acc = 0.0;
        for (a, comp) in c.values.iter().zip(&self.components) {
            acc += a * markov_rotation_vector(&comp.measure, phi)?[0];
        }
        Ok(Some(acc))
    }

    pub fn to_json(&self, phi: &Potential<T>) -> serde_json::Value {
        let rec = phi.recoded();
        let base = phi.base();
        let comps: Vec<serde_json::Value> = self
            .components
            .iter()
            .map(|c| {
                let fc = &self.face.components[c.face_id];
                serde_json::json!({
                    "face_id": c.face_id,
                    "states": fc.states.iter().map(|&s| rec.block_name(s)).collect::<Vec<_>>(),
                    "entropy": c.entropy,
                    "singleton_orbit": fc.is_singleton_orbit,
                    "parry": {"p": c.measure.p, "transition": c.measure.transition},
                })
            })
            .collect();
        let coefficients = self.coefficients.as_ref().map(|c| {
            let (prov, err) = match &c.provenance {
                Provenance::Exact => ("exact".to_string(), 0.0),
                Provenance::Symmetry => ("exact-symmetry".to_string(), 0.0),
                Provenance::Numeric { est_error, converged, .. } => {
                    (if *converged { "numeric" } else { "numeric-unconverged" }.to_string(), *est_error)
                }
            };
            let t_max = match &c.provenance {
                Provenance::Numeric { t_max, .. } => Some(*t_max),
                _ => None,
            };
            serde_json::json!({
                "values": c.values.iter().enumerate().map(|(i, v)| serde_json::json!({
                    "value": v,
                    "exact": c.exact.as_ref().map(|e| e[i].to_string()),
                    "provenance": prov,
                    "est_error": err,
                })).collect::<Vec<_>>(),
                "t_max": t_max,
                "boundary_mass": c.boundary_mass,
                "warnings": c.warnings,
            })
        });
        serde_json::json!({
            "case": self.case,
            "beta": self.face.beta.to_text(),
            "beta_f64": self.face.beta.to_f64(),
            "fingerprint": self.fingerprint.as_ref().map(|f| serde_json::json!({
                "orbits": f.orbit_set,
                "segments": self.fingerprint_orbits.iter().map(|o| base.word(&o.segment)).collect::<Vec<_>>(),
            })),
            "components": comps,
            "coefficients": coefficients,
            "entropy_of_limit": self.entropy_of_limit,
            "cohomology_constant": self.cohomology_constant.as_ref().map(Scalar::to_text),
            "face": self.face.summary(phi),
            "warnings": self.warnings,
        })
    }
}

/// Options for `classify_with`.
#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Run the temperature sweep when the coefficients are not forced.
    pub numeric_coefficients: bool,
    pub use_symmetry: bool,
    pub schedule: Vec<f64>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            numeric_coefficients: false,
            use_symmetry: true,
            schedule: default_schedule(),
        }
    }
}

/// `t = 1, 2, 4, …, 2¹⁴`.
pub fn default_schedule() -> Vec<f64> {
    (0..=14).map(|i| f64::from(1u32 << i)).collect()
}

pub fn classify<T: Scalar>(phi: &Potential<T>) -> Result<ZtClassification<T>> {
    classify_with(phi, &ClassifyOptions::default())
}

/// Classification from the tight subgraph alone: `φ` is cohomologous to a
/// constant iff every edge is tight, and the orbits attaining `β` are the
/// simple cycles of the tight subgraph. No full orbit enumeration is needed.
pub fn classify_with<T: Scalar>(phi: &Potential<T>, opts: &ClassifyOptions) -> Result<ZtClassification<T>> {
    classify_inner(phi, None, opts)
}

/// As `classify_with`, deciding cohomology and the fingerprint from the
/// supplied elementary orbits, cross-checked against the tight subgraph.
pub fn classify_with_orbits<T: Scalar>(
    phi: &Potential<T>,
    orbits: &[ElementaryOrbit],
    opts: &ClassifyOptions,
) -> Result<ZtClassification<T>> {
    classify_inner(phi, Some(orbits), opts)
}

fn classify_inner<T: Scalar>(
    phi: &Potential<T>,
    orbits: Option<&[ElementaryOrbit]>,
    opts: &ClassifyOptions,
) -> Result<ZtClassification<T>> {
    if phi.m() != 1 {
        return Err(Error::invalid("classification needs a scalar potential"));
    }
    if !is_transitive(phi.base()) {
        return Err(Error::Precondition("the shift is not transitive".into()));
    }
    let mut warnings = Vec::new();
    if !T::EXACT {
        warnings.push("float mode: ties are decided up to tolerance".to_string());
    }
    let face = maximizing_subshift(phi)?;
    if face.tolerance_limited {
        warnings.push("tolerance-limited tight edges".to_string());
    }
    let all_tight = face.tight_edges.len() == phi.recoded().graph().edge_count();
    let (cohomologous, cohomology_constant, fingerprint, fingerprint_orbits) = match orbits {
        Some(orbits) => {
            let zero = Potential::zero(phi.base(), phi.k(), 1)?;
            let cohom = cohomology_test(phi, &zero, orbits, crate::numeric::DEFAULT_TOL)?;
            if cohom.tolerance_limited {
                warnings.push("tolerance-limited cohomology decision".to_string());
            }
            if all_tight != cohom.cohomologous {
                warnings.push("orbit averages and tight edges disagree on cohomology".to_string());
            }
            let f = face_in_direction(phi, &[T::one()], orbits)?;
            let members = f.orbit_set.iter().map(|&i| orbits[i].clone()).collect();
            (cohom.cohomologous, cohom.constant, Some(f), members)
        }
        None => {
            let rec = phi.recoded();
            let tight = face.tight_graph(rec.num_states());
            let constant = all_tight.then(|| face.beta.clone());
            match orbits_in_subgraph(rec, &tight, FACE_ORBIT_CAP) {
                Ok(members) => {
                    let vals = vec![face.beta.clone(); members.len()];
                    let f = fingerprint_from_values(vec![T::one()], &vals)?;
                    (all_tight, constant, Some(f), members)
                }
                Err(Error::ResourceLimit(_)) => {
                    warnings.push(format!("face has more than {FACE_ORBIT_CAP} elementary orbits; fingerprint omitted"));
                    (all_tight, constant, None, Vec::new())
                }
                Err(e) => return Err(e),
            }
        }
    };
    let components: Vec<LimitComponent> = face
        .max_entropy_ids
        .iter()
        .map(|&j| LimitComponent {
            face_id: j,
            measure: face.components[j].parry.clone(),
            entropy: face.components[j].h_top,
        })
        .collect();
    let case = if cohomologous {
        ZtCase::CohomologousToConstant
    } else if components.len() > 1 {
        ZtCase::MultiComponent
    } else if face.components[components[0].face_id].is_singleton_orbit {
        ZtCase::VertexPeriodic
    } else {
        ZtCase::UniqueTransitive
    };
    let mut out = ZtClassification {
        case,
        fingerprint,
        fingerprint_orbits,
        entropy_of_limit: face.h_top(),
        face,
        components,
        coefficients: None,
        cohomology_constant,
        warnings,
    };
    let n = out.components.len();
    if n == 1 {
        out.coefficients = Some(Coefficients::exact(vec![Rational::from_integer(1.into())], Provenance::Exact));
    } else if opts.use_symmetry && symmetric_components(phi, &out.face)? {
        let share = Rational::new(1.into(), (n as i64).into());
        out.coefficients = Some(Coefficients::exact(vec![share; n], Provenance::Symmetry));
    } else if opts.numeric_coefficients {
        out.coefficients = Some(zt_numeric(phi, &out, &opts.schedule)?);
    }
    Ok(out)
}

/// Coefficients of the zero-temperature limit over the max-entropy components.
pub fn zt_coefficients<T: Scalar>(phi: &Potential<T>, cls: &ZtClassification<T>, schedule: &[f64]) -> Result<Coefficients> {
    if cls.components.len() == 1 {
        return Ok(Coefficients::exact(vec![Rational::from_integer(1.into())], Provenance::Exact));
    }
    zt_numeric(phi, cls, schedule)
}

/// Whether some symbol permutation preserving `A` and `φ` (up to
/// cohomology) acts transitively on the max-entropy components.
pub fn symmetric_components<T: Scalar>(phi: &Potential<T>, face: &FaceSubshift<T>) -> Result<bool> {
    let base = phi.base();
    let d = base.d();
    let comps: Vec<&[usize]> = face.max_entropy_components().map(|c| c.states.as_slice()).collect();
    if comps.len() < 2 || d > SYMMETRY_MAX_ALPHABET {
        return Ok(false);
    }
    let rec = phi.recoded();
    let a = base.transition();
    let mut reached = vec![false; comps.len()];
    reached[0] = true;
    let mut perm: Vec<usize> = (0..d).collect();
    let mut ok = Ok(());
    for_each_permutation(&mut perm, 0, &mut |sigma| {
        if ok.is_err() || reached.iter().all(|&r| r) {
            return;
        }
        if (0..d).any(|i| (0..d).any(|j| a[sigma[i]][sigma[j]] != a[i][j])) {
            return;
        }
        // image of the first component must be another listed component,
        // and every listed component must map onto a listed one
        let image = |c: &[usize]| -> Option<usize> {
            let mut img: Vec<usize> = c
                .iter()
                .map(|&s| {
                    let b: Vec<usize> = rec.block(s).iter().map(|&x| sigma[x]).collect();
                    rec.index_of(&b).expect("automorphism preserves blocks")
                })
                .collect();
            img.sort_unstable();
            comps.iter().position(|d| *d == img.as_slice())
        };
        let Some(target) = image(comps[0]) else { return };
        if reached[target] || comps.iter().any(|c| image(c).is_none()) {
            return;
        }
        match phi.permuted(sigma).and_then(|p| cohomologous_to_zero(&p.sub(phi)?)) {
            Ok(true) => reached[target] = true,
            Ok(false) => {}
            Err(e) => ok = Err(e),
        }
    });
    ok?;
    Ok(reached.iter().all(|&r| r))
}

fn for_each_permutation(p: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        for_each_permutation(p, i + 1, f);
        p.swap(i, j);
    }
}

/// `ψ ~ 0` iff its maximum cycle mean is zero and every edge is tight.
fn cohomologous_to_zero<T: Scalar>(psi: &Potential<T>) -> Result<bool> {
    let g = psi.recoded().graph();
    let w = psi.scalar_values();
    let (beta, u) = max_cycle_mean(g, &w)?;
    if !beta.is_tie_zero(crate::numeric::DEFAULT_TOL) {
        return Ok(false);
    }
    Ok(g.edges().all(|(i, j)| {
        (w[i].clone() - beta.clone() + u[i].clone() - u[j].clone()).is_tie_zero(crate::numeric::DEFAULT_TOL)
    }))
}

/// Reduced weights kept in the potential's own number type.
struct ExactReduced<T: Scalar> {
    n: usize,
    edges: Vec<(usize, usize, T)>,
    spread: f64,
}

fn exact_reduced<T: Scalar>(phi: &Potential<T>) -> Result<ExactReduced<T>> {
    let g = phi.recoded().graph();
    let w = phi.scalar_values();
    let (beta, u) = max_cycle_mean(g, &w)?;
    let edges: Vec<(usize, usize, T)> = g
        .edges()
        .map(|(i, j)| {
            let r = w[i].clone() - beta.clone() + u[i].clone() - u[j].clone();
            let r = if r > T::zero() { T::zero() } else { r };
            (i, j, r)
        })
        .collect();
    let spread = edges.iter().map(|e| e.2.to_f64().abs()).fold(0.0, f64::max);
    Ok(ExactReduced { n: g.len(), edges, spread })
}

/// Working precision for `M̂(t)`: enough to separate eigenvalues that agree
/// to about `t · n · spread` nats.
pub fn bits_for(t: f64, n: usize, spread: f64) -> usize {
    128 + (t * n as f64 * spread / std::f64::consts::LN_2).ceil() as usize
}

/// Stationary distribution of `μ_{tφ}` computed in `bits` of precision.
fn hp_stationary<T: Scalar>(red: &ExactReduced<T>, t: f64, bits: usize) -> Result<Vec<f64>> {
    let n = red.n;
    let zero = HpFloat::ZERO.with_precision(bits).value();
    let th = HpFloat::try_from(t)
        .map_err(|_| Error::invalid("non-finite t"))?
        .with_precision(bits)
        .value();
    let mut m = vec![vec![zero.clone(); n]; n];
    for (i, j, r) in &red.edges {
        m[*i][*j] = (r.to_hp(bits) * th.clone()).exp().with_precision(bits).value();
    }
    let tol = HpFloat::from_parts(dashu_int::IBig::ONE, 32 - bits as isize)
        .with_precision(bits)
        .value();
    let (_, right, left, _) = perron_hp(&m, &tol);
    let prod: Vec<HpFloat> = right.iter().zip(&left).map(|(a, b)| a.clone() * b.clone()).collect();
    let total = prod.iter().fold(zero, |a, b| a + b.clone());
    if total <= HpFloat::ZERO {
        return Err(Error::numeric("degenerate high precision Perron vectors", f64::NAN));
    }
    Ok(prod.iter().map(|x| (x.clone() / total.clone()).to_f64().value()).collect())
}

/// Per-component masses and the remaining boundary mass.
fn component_masses(p: &[f64], comps: &[&[usize]]) -> (Vec<f64>, f64) {
    let masses: Vec<f64> = comps.iter().map(|c| c.iter().map(|&s| p[s]).sum()).collect();
    let inside: f64 = masses.iter().sum();
    (masses, (1.0 - inside).max(0.0))
}

fn normalized(m: &[f64]) -> Vec<f64> {
    let s: f64 = m.iter().sum();
    m.iter().map(|x| x / s).collect()
}

/// Aitken Δ² on the last three iterates, kept only when it stays in `[0, 1]`
/// and moves the last value by no more than the last step.
fn aitken(x0: f64, x1: f64, x2: f64) -> f64 {
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let den = d2 - d1;
    if den.abs() < 1e-300 || d2 == 0.0 {
        return x2;
    }
    let acc = x2 - d2 * d2 / den;
    if (0.0..=1.0).contains(&acc) && (acc - x2).abs() <= d2.abs() {
        acc
    } else {
        x2
    }
}

/// One step of the numeric sweep.
#[derive(Clone, Debug, Serialize)]
pub struct ZtStep {
    pub t: f64,
    pub bits: usize,
    pub masses: Vec<f64>,
    pub boundary_mass: f64,
}

/// Component masses of `μ_{tφ}` along `schedule` in high precision. Stops
/// early once the normalized masses settle or the precision cap is reached.
pub fn zt_sweep<T: Scalar>(phi: &Potential<T>, comps: &[&[usize]], schedule: &[f64]) -> Result<Vec<ZtStep>> {
    let red = exact_reduced(phi)?;
    let chunk = rayon::current_num_threads().clamp(1, 4);
    let mut steps: Vec<ZtStep> = Vec::new();
    let usable: Vec<f64> = schedule
        .iter()
        .copied()
        .filter(|&t| t > 0.0 && bits_for(t, red.n, red.spread) <= MAX_BITS)
        .collect();
    for batch in usable.chunks(chunk) {
        let rows: Vec<ZtStep> = batch
            .par_iter()
            .map(|&t| {
                let bits = bits_for(t, red.n, red.spread);
                let p = hp_stationary(&red, t, bits)?;
                let (masses, boundary_mass) = component_masses(&p, comps);
                Ok(ZtStep { t, bits, masses, boundary_mass })
            })
            .collect::<Result<_>>()?;
        for row in rows {
            let settled = row.boundary_mass < CONVERGED_DELTA
                && steps.last().is_some_and(|prev| {
                    max_delta(&normalized(&prev.masses), &normalized(&row.masses)) < CONVERGED_DELTA
                });
            steps.push(row);
            if settled {
                return Ok(steps);
            }
        }
    }
    Ok(steps)
}

fn max_delta(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn zt_numeric<T: Scalar>(phi: &Potential<T>, cls: &ZtClassification<T>, schedule: &[f64]) -> Result<Coefficients> {
    let comps: Vec<&[usize]> = cls
        .components
        .iter()
        .map(|c| cls.face.components[c.face_id].states.as_slice())
        .collect();
    let steps = zt_sweep(phi, &comps, schedule)?;
    let requested = schedule.iter().copied().fold(0.0, f64::max);
    coefficients_from_sweep(&steps, requested)
}

/// Normalized, extrapolated coefficients from a finished sweep; `requested`
/// is the largest temperature asked for.
pub fn coefficients_from_sweep(steps: &[ZtStep], requested: f64) -> Result<Coefficients> {
    let Some(last) = steps.last() else {
        return Err(Error::numeric("temperature schedule is empty within the precision cap", f64::NAN));
    };
    let norm: Vec<Vec<f64>> = steps.iter().map(|s| normalized(&s.masses)).collect();
    let k = norm.len();
    let est_error = if k >= 2 { max_delta(&norm[k - 1], &norm[k - 2]) } else { f64::INFINITY };
    let mut values = norm[k - 1].clone();
    if k >= 3 && est_error >= CONVERGED_DELTA {
        let acc: Vec<f64> = (0..values.len())
            .map(|j| aitken(norm[k - 3][j], norm[k - 2][j], norm[k - 1][j]))
            .collect();
        values = normalized(&acc);
    }
    let converged = est_error <= UNCONVERGED_DELTA;
    let mut warnings = Vec::new();
    if !converged {
        warnings.push(format!("unconverged: last step changed coefficients by {est_error:e}"));
    }
    if last.boundary_mass >= BOUNDARY_MASS_TOL {
        warnings.push(format!("boundary mass {:e} has not vanished", last.boundary_mass));
    }
    if last.t < requested && est_error >= CONVERGED_DELTA {
        warnings.push(format!("precision cap reached at t = {}", last.t));
    }
    Ok(Coefficients {
        values,
        exact: None,
        provenance: Provenance::Numeric {
            t_max: last.t,
            est_error,
            converged,
        },
        boundary_mass: last.boundary_mass,
        warnings,
    })
}

/// One temperature of the ground-state diagnostic.
#[derive(Clone, Debug, Serialize)]
pub struct GroundStateRow {
    pub t: f64,
    pub average: f64,
    pub entropy: f64,
    pub average_gap: f64,
    pub entropy_gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroundStateReport {
    pub beta: f64,
    pub face_entropy: f64,
    pub rows: Vec<GroundStateRow>,
    /// Fitted exponential rates `−d log(gap)/dt` over the last two rows.
    pub average_rate: Option<f64>,
    pub entropy_rate: Option<f64>,
    /// Last temperature before the double precision transfer matrix underflowed.
    pub t_reached: f64,
}

/// Check that `∫φ dμ_{tφ} → β` and `h(μ_{tφ}) → h_top(X_F)`.
pub fn ground_state_check<T: Scalar>(
    phi: &Potential<T>,
    cls: &ZtClassification<T>,
    schedule: &[f64],
) -> Result<GroundStateReport> {
    let rw = ReducedWeights::new(phi)?;
    let beta = cls.face.beta.to_f64();
    let h_f = cls.entropy_of_limit;
    let mut rows = Vec::new();
    for &t in schedule {
        let (mu, _) = match equilibrium_reduced(phi, &rw, t) {
            Ok(x) => x,
            Err(Error::Underflow { .. }) | Err(Error::Numeric { .. }) => break,
            Err(e) => return Err(e),
        };
        let average = markov_rotation_vector(&mu, phi)?[0];
        let entropy = markov_entropy(&mu);
        rows.push(GroundStateRow {
            t,
            average,
            entropy,
            average_gap: (beta - average).abs(),
            entropy_gap: (entropy - h_f).abs(),
        });
    }
    let rate = |f: fn(&GroundStateRow) -> f64| -> Option<f64> {
        let n = rows.len();
        if n < 2 {
            return None;
        }
        let (a, b) = (&rows[n - 2], &rows[n - 1]);
        let (ga, gb) = (f(a), f(b));
        (ga > 0.0 && gb > 0.0).then(|| -(gb.ln() - ga.ln()) / (b.t - a.t))
    };
    Ok(GroundStateReport {
        beta,
        face_entropy: h_f,
        average_rate: rate(|r| r.average_gap),
        entropy_rate: rate(|r| r.entropy_gap),
        t_reached: rows.last().map_or(0.0, |r| r.t),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;
    use crate::sft::Sft;

    fn pot(s: &Sft, m: &[&[i64]]) -> Potential<Rational> {
        let v: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect();
        Potential::from_matrix(s, &v).unwrap()
    }

    #[test]
    fn example_a1_cases() {
        let s = Sft::full(2);
        let c = classify(&pot(&s, &[&[1, 0], &[0, 0]])).unwrap();
        assert_eq!(c.case, ZtCase::VertexPeriodic);
        assert_eq!(c.entropy_of_limit, 0.0);
        let c = classify(&pot(&s, &[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(c.case, ZtCase::VertexPeriodic);
        let c = classify(&pot(&s, &[&[0, 1], &[-1, 0]])).unwrap();
        assert_eq!(c.case, ZtCase::CohomologousToConstant);
        assert!((c.entropy_of_limit - 2f64.ln()).abs() < 1e-12);
        let c = classify(&pot(&s, &[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(c.case, ZtCase::MultiComponent);
        let coeffs = c.coefficients.unwrap();
        assert_eq!(coeffs.provenance, Provenance::Symmetry);
        assert_eq!(coeffs.exact.unwrap(), vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn cone_invariance() {
        let s = Sft::full(2);
        let phi = pot(&s, &[&[1, 2], &[0, 0]]);
        let a = classify(&phi).unwrap();
        let b = classify(&phi.scale(&rat(7, 3))).unwrap();
        assert_eq!(a.case, b.case);
        assert_eq!(a.fingerprint, b.fingerprint.map(|f| FaceFingerprint { max_value: a.beta().clone(), ..f }));
        assert_eq!(a.fingerprint_orbits, b.fingerprint_orbits);
        let orbits = crate::orbits::elementary_orbits(&s, 2).unwrap();
        let c = classify_with_orbits(&phi, &orbits, &ClassifyOptions::default()).unwrap();
        assert_eq!(c.fingerprint_orbits, a.fingerprint_orbits);
        assert!(c.warnings.is_empty());
        assert_eq!(a.case, ZtCase::UniqueTransitive);
    }

    #[test]
    fn non_transitive_shift_is_rejected() {
        let s = Sft::new(vec![vec![1, 0], vec![0, 1]], None).unwrap();
        let phi = Potential::<Rational>::zero(&s, 1, 1).unwrap();
        assert!(matches!(classify(&phi), Err(Error::Precondition(_))));
    }

    #[test]
    fn two_fixed_points_numeric_half() {
        let s = Sft::full(2);
        let phi = pot(&s, &[&[1, 0], &[0, 1]]);
        let opts = ClassifyOptions {
            numeric_coefficients: true,
            use_symmetry: false,
            schedule: default_schedule(),
        };
        let c = classify_with(&phi, &opts).unwrap();
        let co = c.coefficients.unwrap();
        assert!(matches!(co.provenance, Provenance::Numeric { converged: true, .. }));
        for v in co.values {
            assert!((v - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn aitken_guards() {
        assert_eq!(aitken(0.5, 0.5, 0.5), 0.5);
        let x = aitken(0.4, 0.45, 0.475);
        assert!((x - 0.5).abs() < 1e-12);
        assert_eq!(aitken(0.9, 0.95, 0.99), 0.99);
    }
}
