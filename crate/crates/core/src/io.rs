//! Run specifications, result envelopes, the orbit cache and file output.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::builtins;
use crate::entropy_curve::{differentiability_scan, face_entropy_curve};
use crate::error::{Error, Result};
use crate::geometry::{genericity_check, rotation_set, rotation_set_by_support};
use crate::numeric::{parse_value, ParsedValue, Rational, Scalar, DEFAULT_TOL};
use crate::orbits::{birkhoff_average, orbits_of_recoded, ElementaryOrbit, DEFAULT_MAX_ORBITS};
use crate::potential::{cohomology_test, AnyPotential, Potential, PotentialFile};
use crate::sft::{recode_to_one_step, RecodedSft, Sft};
use crate::thermo::t_sweep;
use crate::zero_temperature::{
    classify_with, coefficients_from_sweep, default_schedule, ground_state_check, zt_sweep, ClassifyOptions,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_ENV: &str = "THERMOSHIFT_CACHE";
pub const THREADS_ENV: &str = "THERMOSHIFT_THREADS";
pub const DEFAULT_SAMPLES: usize = 201;
pub const DEFAULT_H_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Orbits,
    Rotset,
    Classify,
    Ztsweep,
    Facecurve,
    Cohom,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Orbits => "orbits",
            Command::Rotset => "rotset",
            Command::Classify => "classify",
            Command::Ztsweep => "ztsweep",
            Command::Facecurve => "facecurve",
            Command::Cohom => "cohom",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

/// Inputs of a run. `shift` and `potential` are builtin names, paths to JSON
/// files, or inline JSON (text starting with `{`).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSpec {
    pub shift: Option<String>,
    pub k: Option<usize>,
    pub potential: Option<String>,
    /// Second potential for `cohom`; zero when absent.
    pub against: Option<String>,
    pub alpha: Option<Vec<String>>,
    pub tmax: Option<f64>,
    pub samples: Option<usize>,
    pub mode: Option<Mode>,
    pub tolerance: Option<f64>,
    pub h_step: Option<f64>,
    pub max_orbits: Option<usize>,
    /// Run the temperature sweep in `classify` when coefficients are not forced.
    pub numeric: Option<bool>,
}

impl RunSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Fields set in `over` win.
    pub fn overridden_by(self, over: RunSpec) -> RunSpec {
        RunSpec {
            shift: over.shift.or(self.shift),
            k: over.k.or(self.k),
            potential: over.potential.or(self.potential),
            against: over.against.or(self.against),
            alpha: over.alpha.or(self.alpha),
            tmax: over.tmax.or(self.tmax),
            samples: over.samples.or(self.samples),
            mode: over.mode.or(self.mode),
            tolerance: over.tolerance.or(self.tolerance),
            h_step: over.h_step.or(self.h_step),
            max_orbits: over.max_orbits.or(self.max_orbits),
            numeric: over.numeric.or(self.numeric),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub tool_version: String,
    /// SHA-256 of the canonical run specification (resolved inputs).
    pub input_hash: String,
    /// Seconds since the Unix epoch; kept out of the payload.
    pub timestamp: u64,
    pub command: Command,
    pub schema_version: u32,
    pub payload: Value,
    pub warnings: Vec<String>,
}

/// A secondary output file (CSV) of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub envelope: ResultEnvelope,
    pub artifacts: Vec<Artifact>,
}

/// Where enumerated orbits are persisted, if anywhere.
#[derive(Clone, Debug, Default)]
pub struct CacheConfig {
    pub dir: Option<PathBuf>,
}

impl CacheConfig {
    pub fn from_env() -> Self {
        CacheConfig {
            dir: std::env::var_os(CACHE_ENV).map(PathBuf::from),
        }
    }

    pub fn disabled() -> Self {
        CacheConfig { dir: None }
    }
}

fn read_text(path: &str) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read '{path}': {e}")))
}

fn load_shift(text: &str) -> Result<Sft> {
    if text.trim_start().starts_with('{') {
        return Sft::from_json(text);
    }
    if builtins::SHIFT_NAMES.contains(&text) {
        return builtins::shift(text);
    }
    Sft::from_json(&read_text(text)?)
}

/// A potential reference resolved to file form, with its shift when builtin.
fn load_potential(text: &str) -> Result<(PotentialFile, Option<Sft>)> {
    if text.trim_start().starts_with('{') {
        return Ok((PotentialFile::from_json(text)?, None));
    }
    if builtins::POTENTIAL_NAMES.contains(&text) {
        let (s, p) = builtins::potential(text)?;
        return Ok((p.to_file(), Some(s)));
    }
    Ok((PotentialFile::from_json(&read_text(text)?)?, None))
}

/// Everything a command needs, after resolving names and files.
struct Resolved {
    sft: Sft,
    potential: Option<PotentialFile>,
    against: Option<PotentialFile>,
    alpha: Option<Vec<ParsedValue>>,
}

fn resolve(spec: &RunSpec) -> Result<Resolved> {
    let pot = spec.potential.as_deref().map(load_potential).transpose()?;
    let sft = match (&spec.shift, &pot) {
        (Some(s), Some((_, Some(own)))) => {
            let s = load_shift(s)?;
            if s.transition() != own.transition() {
                return Err(Error::invalid("builtin potential belongs to a different shift"));
            }
            s
        }
        (Some(s), _) => load_shift(s)?,
        (None, Some((_, Some(own)))) => own.clone(),
        (None, _) => return Err(Error::invalid("no shift given")),
    };
    let against = spec.against.as_deref().map(load_potential).transpose()?.map(|p| p.0);
    let alpha = spec
        .alpha
        .as_ref()
        .map(|a| a.iter().map(|x| parse_value(x)).collect::<Result<Vec<_>>>())
        .transpose()?;
    Ok(Resolved {
        sft,
        potential: pot.map(|p| p.0),
        against,
        alpha,
    })
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Digest of the command and the resolved inputs; independent of how the
/// inputs were referenced (name, path or inline).
fn input_hash(command: Command, spec: &RunSpec, r: &Resolved) -> String {
    let canonical = json!({
        "command": command,
        "shift": r.sft.transition(),
        "k": spec.k,
        "potential": r.potential,
        "against": r.against,
        "alpha": spec.alpha,
        "tmax": spec.tmax,
        "samples": spec.samples,
        "mode": spec.mode.unwrap_or_default(),
        "tolerance": spec.tolerance,
        "h_step": spec.h_step,
        "max_orbits": spec.max_orbits,
        "numeric": spec.numeric,
    });
    sha256_hex(canonical.to_string().as_bytes())
}

fn matrix_hash(sft: &Sft) -> String {
    sha256_hex(serde_json::to_string(sft.transition()).expect("serializable").as_bytes())
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    matrix_hash: String,
    k: usize,
    orbits: Vec<CachedOrbit>,
}

#[derive(Serialize, Deserialize)]
struct CachedOrbit {
    segment: Vec<usize>,
    states: Vec<usize>,
}

fn cache_path(dir: &Path, sft: &Sft, k: usize) -> PathBuf {
    dir.join(format!("orbits-{}-k{k}.json", &matrix_hash(sft)[..16]))
}

/// Cached orbits, checked to be simple cycles of the recoding.
fn read_cache(path: &Path, sft: &Sft, rec: &RecodedSft) -> Result<Vec<ElementaryOrbit>> {
    let file: CacheFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if file.matrix_hash != matrix_hash(sft) || file.k != rec.k() {
        return Err(Error::invalid("cache key mismatch"));
    }
    let n = rec.num_states();
    let mut out = Vec::with_capacity(file.orbits.len());
    for o in file.orbits {
        let len = o.states.len();
        let ok = len > 0
            && o.segment.len() == len
            && o.states.iter().all(|&s| s < n)
            && (0..len).all(|i| rec.graph().has_edge(o.states[i], o.states[(i + 1) % len]))
            && (0..len).all(|i| rec.block(o.states[i])[0] == o.segment[i]);
        if !ok {
            return Err(Error::invalid("cache entry is not a cycle of the recoded graph"));
        }
        out.push(ElementaryOrbit {
            k: rec.k(),
            segment: o.segment,
            states: o.states,
        });
    }
    Ok(out)
}

/// Elementary orbits of `sft` at window `k`, through the cache when enabled.
/// A corrupt entry is recomputed and overwritten with a warning.
pub fn cache_get_or_compute(
    cache: &CacheConfig,
    sft: &Sft,
    k: usize,
    max_orbits: usize,
    warnings: &mut Vec<String>,
) -> Result<Vec<ElementaryOrbit>> {
    let rec = recode_to_one_step(sft, k)?;
    let Some(dir) = &cache.dir else {
        return orbits_of_recoded(&rec, max_orbits);
    };
    let path = cache_path(dir, sft, k);
    if path.exists() {
        match read_cache(&path, sft, &rec) {
            Ok(o) if o.len() <= max_orbits => return Ok(o),
            Ok(_) => {
                return Err(Error::ResourceLimit(format!("more than {max_orbits} elementary orbits")));
            }
            Err(e) => warnings.push(format!("corrupt orbit cache {}: {e}; recomputed", path.display())),
        }
    }
    let orbits = orbits_of_recoded(&rec, max_orbits)?;
    let file = CacheFile {
        matrix_hash: matrix_hash(sft),
        k,
        orbits: orbits
            .iter()
            .map(|o| CachedOrbit {
                segment: o.segment.clone(),
                states: o.states.clone(),
            })
            .collect(),
    };
    std::fs::create_dir_all(dir)?;
    write_atomic(&path, &serde_json::to_string(&file).expect("serializable"))?;
    Ok(orbits)
}

/// Write through a temporary file in the same directory and rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Write the envelope as `<command>.json` and every artifact into `dir`.
/// Nothing is written unless all contents are ready.
pub fn write_output(dir: &Path, out: &RunOutput) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut files = vec![(
        dir.join(format!("{}.json", out.envelope.command.name())),
        serde_json::to_string_pretty(&out.envelope).expect("serializable") + "\n",
    )];
    for a in &out.artifacts {
        files.push((dir.join(&a.file_name), a.contents.clone()));
    }
    for (p, c) in &files {
        write_atomic(p, c)?;
    }
    Ok(files.into_iter().map(|f| f.0).collect())
}

fn schedule_up_to(tmax: Option<f64>) -> Result<Vec<f64>> {
    match tmax {
        None => Ok(default_schedule()),
        Some(t) if t.is_finite() && t >= 1.0 => {
            let mut out = Vec::new();
            let mut x = 1.0;
            while x <= t {
                out.push(x);
                x *= 2.0;
            }
            Ok(out)
        }
        Some(t) => Err(Error::invalid(format!("tmax must be at least 1, got {t}"))),
    }
}

/// Execute one command.
pub fn run(command: Command, spec: &RunSpec, cache: &CacheConfig) -> Result<RunOutput> {
    let r = resolve(spec)?;
    let mut warnings = Vec::new();
    let input_hash = input_hash(command, spec, &r);
    let (payload, artifacts) = if command == Command::Orbits {
        run_orbits(spec, &r, cache, &mut warnings)?
    } else {
        let pf = r
            .potential
            .as_ref()
            .ok_or_else(|| Error::invalid(format!("{} needs a potential", command.name())))?;
        let phi = pf.resolve(&r.sft)?;
        let psi = r.against.as_ref().map(|p| p.resolve(&r.sft)).transpose()?;
        let alpha_exact = r.alpha.iter().flatten().all(|x| matches!(x, ParsedValue::Exact(_)));
        let inputs_exact = phi.is_exact() && psi.as_ref().is_none_or(AnyPotential::is_exact) && alpha_exact;
        let mode = spec.mode.unwrap_or_default();
        if mode == Mode::Exact && !inputs_exact {
            warnings.push("float values in the input force float mode; ties are decided up to tolerance".into());
        }
        if mode == Mode::Exact && inputs_exact {
            let to_exact = |a: AnyPotential| match a {
                AnyPotential::Exact(p) => p,
                AnyPotential::Float(_) => unreachable!(),
            };
            let alpha = r.alpha.as_ref().map(|a| {
                a.iter()
                    .map(|x| match x {
                        ParsedValue::Exact(q) => q.clone(),
                        ParsedValue::Float(_) => unreachable!(),
                    })
                    .collect::<Vec<Rational>>()
            });
            dispatch(command, spec, &r.sft, to_exact(phi), psi.map(to_exact), alpha, cache, &mut warnings)?
        } else {
            let alpha = r.alpha.as_ref().map(|a| a.iter().map(ParsedValue::to_f64).collect::<Vec<f64>>());
            dispatch(command, spec, &r.sft, phi.to_float(), psi.map(|p| p.to_float()), alpha, cache, &mut warnings)?
        }
    };
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    Ok(RunOutput {
        envelope: ResultEnvelope {
            tool_version: TOOL_VERSION.to_string(),
            input_hash,
            timestamp,
            command,
            schema_version: SCHEMA_VERSION,
            payload,
            warnings,
        },
        artifacts,
    })
}

fn run_orbits(spec: &RunSpec, r: &Resolved, cache: &CacheConfig, warnings: &mut Vec<String>) -> Result<(Value, Vec<Artifact>)> {
    let k = spec.k.or(r.potential.as_ref().map(|p| p.k)).unwrap_or(1);
    let max = spec.max_orbits.unwrap_or(DEFAULT_MAX_ORBITS);
    let orbits = cache_get_or_compute(cache, &r.sft, k, max, warnings)?;
    let rec = recode_to_one_step(&r.sft, k)?;
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for o in &orbits {
        *histogram.entry(o.period()).or_default() += 1;
    }
    let rows: Vec<Value> = orbits
        .iter()
        .map(|o| {
            json!({
                "period": o.period(),
                "segment": r.sft.word(&o.segment),
                "cylinders": o.states.iter().map(|&s| rec.block_name(s)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut csv = String::from("period,segment,cylinders\n");
    for o in &orbits {
        let cyl: Vec<String> = o.states.iter().map(|&s| rec.block_name(s)).collect();
        csv.push_str(&format!("{},{},{}\n", o.period(), r.sft.word(&o.segment), cyl.join(" ")));
    }
    let payload = json!({
        "k": k,
        "count": orbits.len(),
        "histogram": histogram.iter().map(|(p, c)| json!({"period": p, "count": c})).collect::<Vec<_>>(),
        "orbits": rows,
    });
    Ok((payload, vec![Artifact { file_name: "orbits.csv".into(), contents: csv }]))
}

/// The scalar potential a command works on: `φ` itself, or `α·Φ`.
fn scalar_target<T: Scalar>(phi: &Potential<T>, alpha: Option<&[T]>) -> Result<Potential<T>> {
    match (phi.m(), alpha) {
        (_, Some(a)) => phi.scalarize(a),
        (1, None) => Ok(phi.clone()),
        (m, None) => Err(Error::invalid(format!("potential has m = {m}; give --alpha to pick a direction"))),
    }
}

#[allow(clippy::too_many_arguments)]
fn dispatch<T: Scalar>(
    command: Command,
    spec: &RunSpec,
    sft: &Sft,
    phi: Potential<T>,
    psi: Option<Potential<T>>,
    alpha: Option<Vec<T>>,
    cache: &CacheConfig,
    warnings: &mut Vec<String>,
) -> Result<(Value, Vec<Artifact>)> {
    let phi = match spec.k {
        Some(k) if k > phi.k() => phi.up_level(k)?,
        Some(k) if k < phi.k() => {
            return Err(Error::invalid(format!("potential lives on {}-blocks, cannot use k = {k}", phi.k())))
        }
        _ => phi,
    };
    let max_orbits = spec.max_orbits.unwrap_or(DEFAULT_MAX_ORBITS);
    let tol = spec.tolerance.unwrap_or(DEFAULT_TOL);
    match command {
        Command::Orbits => unreachable!("handled without a potential"),
        Command::Rotset => {
            let (method, rot, orbits) = match cache_get_or_compute(cache, sft, phi.k(), max_orbits, warnings) {
                Ok(orbits) => ("orbits", rotation_set(&phi, &orbits)?, orbits),
                Err(Error::ResourceLimit(msg)) if phi.m() <= 2 => {
                    warnings.push(format!("{msg}; hull built from support queries"));
                    let (rot, witnesses) = rotation_set_by_support(&phi)?;
                    ("support", rot, witnesses)
                }
                Err(e) => return Err(e),
            };
            let genericity = if method == "orbits" && phi.m() <= 3 {
                Some(genericity_check(&phi, &orbits)?)
            } else {
                None
            };
            let payload = json!({
                "method": method,
                "polytope": rot.to_json(),
                "segments": rot.generators.iter().map(|(i, _)| sft.word(&orbits[*i].segment)).collect::<Vec<_>>(),
                "genericity": genericity,
            });
            let csv = rot.to_csv(&orbits, |w| sft.word(w));
            Ok((payload, vec![Artifact { file_name: "rotset.csv".into(), contents: csv }]))
        }
        Command::Classify => {
            let target = scalar_target(&phi, alpha.as_deref())?;
            let opts = ClassifyOptions {
                numeric_coefficients: spec.numeric.unwrap_or(false),
                use_symmetry: true,
                schedule: schedule_up_to(spec.tmax)?,
            };
            let cls = classify_with(&target, &opts)?;
            warnings.extend(cls.warnings.iter().cloned());
            if let Some(c) = &cls.coefficients {
                warnings.extend(c.warnings.iter().cloned());
            }
            let gs = ground_state_check(&target, &cls, &default_schedule())?;
            let mut payload = cls.to_json(&target);
            payload["ground_state"] = serde_json::to_value(&gs).expect("serializable");
            payload["limit_average"] = json!(cls.limit_average(&target)?);
            Ok((payload, Vec::new()))
        }
        Command::Ztsweep => {
            let target = scalar_target(&phi, alpha.as_deref())?;
            let cls = classify_with(&target, &ClassifyOptions::default())?;
            let comps: Vec<&[usize]> = cls
                .components
                .iter()
                .map(|c| cls.face.components[c.face_id].states.as_slice())
                .collect();
            let schedule = schedule_up_to(spec.tmax)?;
            let steps = zt_sweep(&target, &comps, &schedule)?;
            let coefficients = coefficients_from_sweep(&steps, schedule.iter().copied().fold(0.0, f64::max))?;
            warnings.extend(coefficients.warnings.iter().cloned());
            let n = comps.len();
            let mut csv = String::from("t,bits,boundary_mass");
            for j in 0..n {
                csv.push_str(&format!(",mass_{j}"));
            }
            for j in 0..n {
                csv.push_str(&format!(",coef_{j}"));
            }
            csv.push('\n');
            for s in &steps {
                let total: f64 = s.masses.iter().sum();
                csv.push_str(&format!("{},{},{:e}", s.t, s.bits, s.boundary_mass));
                for m in &s.masses {
                    csv.push_str(&format!(",{m}"));
                }
                for m in &s.masses {
                    csv.push_str(&format!(",{}", m / total));
                }
                csv.push('\n');
            }
            // double precision thermodynamics up to the first underflow
            let mut thermo = String::from("t,pressure,entropy,rv\n");
            for &t in &schedule {
                match t_sweep(&target, &target, &[t]) {
                    Ok(rows) => {
                        let row = &rows[0];
                        thermo.push_str(&format!("{},{},{:e},{}\n", row.t, row.pressure, row.entropy, row.rv[0]));
                    }
                    Err(Error::Underflow { .. }) | Err(Error::Numeric { .. }) => break,
                    Err(e) => return Err(e),
                }
            }
            let rec = target.recoded();
            let payload = json!({
                "beta": cls.beta().to_text(),
                "components": comps.iter().map(|c| c.iter().map(|&s| rec.block_name(s)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "steps": steps,
                "coefficients": coefficients,
            });
            Ok((
                payload,
                vec![
                    Artifact { file_name: "ztsweep.csv".into(), contents: csv },
                    Artifact { file_name: "ztsweep_thermo.csv".into(), contents: thermo },
                ],
            ))
        }
        Command::Facecurve => {
            let alpha = alpha.ok_or_else(|| Error::invalid("facecurve needs --alpha"))?;
            let curve = face_entropy_curve(&phi, &alpha, spec.samples.unwrap_or(DEFAULT_SAMPLES))?;
            let kinks = differentiability_scan(&curve, spec.h_step.unwrap_or(DEFAULT_H_STEP))?;
            warnings.extend(curve.warnings.iter().cloned());
            let payload = json!({
                "alpha": curve.alpha,
                "endpoints": curve.endpoints_exact,
                "face_entropy": curve.face_entropy,
                "envelope": curve.envelope,
                "orbit_marks": curve.orbit_marks,
                "kinks": kinks,
            });
            Ok((payload, vec![Artifact { file_name: "facecurve.csv".into(), contents: curve.to_csv() }]))
        }
        Command::Cohom => {
            let phi = scalar_target(&phi, alpha.as_deref())?;
            let psi = match psi {
                Some(p) => scalar_target(&p, alpha.as_deref())?,
                None => Potential::zero(sft, phi.k(), 1)?,
            };
            let k = phi.k().max(psi.k());
            let (phi, psi) = (phi.up_level(k)?, psi.up_level(k)?);
            let orbits = cache_get_or_compute(cache, sft, k, max_orbits, warnings)?;
            let rep = cohomology_test(&phi, &psi, &orbits, tol)?;
            if rep.tolerance_limited {
                warnings.push("tolerance-limited cohomology decision".into());
            }
            let diff = phi.sub(&psi)?;
            let witness = rep
                .witness
                .map(|(i, j)| -> Result<Value> {
                    Ok(json!([
                        {"segment": sft.word(&orbits[i].segment), "average": birkhoff_average(&orbits[i], &diff)?[0].to_text()},
                        {"segment": sft.word(&orbits[j].segment), "average": birkhoff_average(&orbits[j], &diff)?[0].to_text()},
                    ]))
                })
                .transpose()?;
            let payload = json!({
                "k": k,
                "orbits_checked": orbits.len(),
                "cohomologous": rep.cohomologous,
                "constant": rep.constant.as_ref().map(Scalar::to_text),
                "witness": witness,
                "tolerance_limited": rep.tolerance_limited,
            });
            Ok((payload, Vec::new()))
        }
    }
}

/// Process exit code for an error: 2 for bad input, 3 for numeric failures.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numeric() {
        3
    } else {
        2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(shift: &str, potential: Option<&str>) -> RunSpec {
        RunSpec {
            shift: Some(shift.into()),
            potential: potential.map(Into::into),
            ..RunSpec::default()
        }
    }

    #[test]
    fn orbit_census_and_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CacheConfig {
            dir: Some(dir.path().to_path_buf()),
        };
        let mut s = spec("full3", None);
        s.k = Some(2);
        let a = run(Command::Orbits, &s, &cache).unwrap();
        assert_eq!(a.envelope.payload["count"], 148);
        let b = run(Command::Orbits, &s, &cache).unwrap();
        assert_eq!(a.envelope.payload, b.envelope.payload);
        assert_eq!(a.envelope.input_hash, b.envelope.input_hash);
        let c = run(Command::Orbits, &s, &CacheConfig::disabled()).unwrap();
        assert_eq!(a.envelope.payload.to_string(), c.envelope.payload.to_string());
        // corrupt the entry: recomputed with a warning
        let path = cache_path(dir.path(), &Sft::full(3), 2);
        std::fs::write(&path, "{not json").unwrap();
        let d = run(Command::Orbits, &s, &cache).unwrap();
        assert_eq!(d.envelope.payload, a.envelope.payload);
        assert!(d.envelope.warnings.iter().any(|w| w.contains("corrupt")));
        assert!(read_cache(&path, &Sft::full(3), &recode_to_one_step(&Sft::full(3), 2).unwrap()).is_ok());
    }

    #[test]
    fn classify_builtin_vertex_case() {
        let out = run(Command::Classify, &spec("full2", Some("a1-1")), &CacheConfig::disabled()).unwrap();
        assert_eq!(out.envelope.payload["case"], "VertexPeriodic");
        assert_eq!(out.envelope.payload["fingerprint"]["segments"], json!(["0"]));
    }

    #[test]
    fn hash_ignores_how_inputs_are_referenced() {
        let (s, p) = builtins::potential("a1-5").unwrap();
        let inline = serde_json::to_string(&p.to_file()).unwrap();
        let a = run(Command::Classify, &spec("full2", Some("a1-5")), &CacheConfig::disabled()).unwrap();
        let b = run(Command::Classify, &spec(&s.to_json(), Some(&inline)), &CacheConfig::disabled()).unwrap();
        assert_eq!(a.envelope.input_hash, b.envelope.input_hash);
        assert_eq!(a.envelope.payload, b.envelope.payload);
    }

    #[test]
    fn float_entries_force_float_mode() {
        let p = r#"{"k":1,"m":1,"values":{"0":["0.5"],"1":["0"]}}"#;
        let out = run(Command::Classify, &spec("full2", Some(p)), &CacheConfig::disabled()).unwrap();
        assert!(out.envelope.warnings.iter().any(|w| w.contains("float mode")));
        assert_eq!(out.envelope.payload["case"], "VertexPeriodic");
    }

    #[test]
    fn input_errors() {
        let e = run(Command::Classify, &spec("full2", None), &CacheConfig::disabled()).unwrap_err();
        assert_eq!(exit_code(&e), 2);
        let e = run(Command::Classify, &spec("full2", Some("{\"k\": 1,")), &CacheConfig::disabled()).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = run(Command::Classify, &spec("full3", Some("a1-1")), &CacheConfig::disabled()).unwrap_err();
        assert_eq!(exit_code(&e), 2);
    }

    #[test]
    fn spec_precedence() {
        let file = RunSpec::from_json(r#"{"shift": "full2", "k": 3, "samples": 5}"#).unwrap();
        let cli = RunSpec {
            k: Some(2),
            ..RunSpec::default()
        };
        let m = file.overridden_by(cli);
        assert_eq!((m.shift.as_deref(), m.k, m.samples), (Some("full2"), Some(2), Some(5)));
        assert!(RunSpec::from_json(r#"{"shfit": "full2"}"#).is_err());
    }

    #[test]
    fn atomic_output() {
        let dir = tempfile::tempdir().unwrap();
        let out = run(Command::Facecurve, &{
            let mut s = spec("exB3", Some("exB3"));
            s.alpha = Some(vec!["0".into(), "-1".into()]);
            s.samples = Some(101);
            s
        }, &CacheConfig::disabled())
        .unwrap();
        let files = write_output(dir.path(), &out).unwrap();
        assert_eq!(files.len(), 2);
        let csv = std::fs::read_to_string(dir.path().join("facecurve.csv")).unwrap();
        assert!(csv.starts_with("s,w_x,w_y,h_envelope,component_id_or_bridge\n"));
        assert_eq!(out.envelope.payload["kinks"]["kinks"].as_array().unwrap().len(), 1);
        // only the two outputs, no temporaries left behind
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
    }
}
