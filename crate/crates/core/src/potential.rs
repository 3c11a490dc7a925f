//! Locally constant potentials `Φ ∈ LC_k(X, ℝ^m)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{dot, parse_value, ParsedValue, Rational, Scalar, DEFAULT_TOL};
use crate::orbits::{birkhoff_average, ElementaryOrbit};
use crate::sft::{recode_to_one_step, RecodedSft, Sft};

/// An `m`-dimensional function constant on `k`-cylinders.
///
/// Values are indexed by the state ids of the `k`-block recoding, so the
/// recoded one-step potential is simply `values[state]`.
#[derive(Clone, Debug)]
pub struct Potential<T: Scalar> {
    recoded: Arc<RecodedSft>,
    m: usize,
    values: Vec<Vec<T>>,
}

impl<T: Scalar> Potential<T> {
    pub fn new(recoded: Arc<RecodedSft>, values: Vec<Vec<T>>) -> Result<Self> {
        if values.len() != recoded.num_states() {
            return Err(Error::invalid(format!(
                "{} values for {} admissible {}-blocks",
                values.len(),
                recoded.num_states(),
                recoded.k()
            )));
        }
        let m = values.first().map_or(0, Vec::len);
        if m == 0 {
            return Err(Error::invalid("potential dimension must be at least 1"));
        }
        if values.iter().any(|v| v.len() != m) {
            return Err(Error::invalid("potential values have inconsistent dimensions"));
        }
        Ok(Potential { recoded, m, values })
    }

    pub fn from_fn(sft: &Sft, k: usize, f: impl Fn(&[usize]) -> Vec<T>) -> Result<Self> {
        let recoded = Arc::new(recode_to_one_step(sft, k)?);
        let values = recoded.states().iter().map(|b| f(b)).collect();
        Self::new(recoded, values)
    }

    /// Scalar potential on 2-blocks given by a `d × d` matrix `M[a][b] = φ_{a,b}`.
    pub fn from_matrix(sft: &Sft, m: &[Vec<T>]) -> Result<Self> {
        let d = sft.d();
        if m.len() != d || m.iter().any(|r| r.len() != d) {
            return Err(Error::invalid(format!("potential matrix must be {d}x{d}")));
        }
        Self::from_fn(sft, 2, |b| vec![m[b[0]][b[1]].clone()])
    }

    pub fn constant(sft: &Sft, k: usize, c: Vec<T>) -> Result<Self> {
        Self::from_fn(sft, k, |_| c.clone())
    }

    pub fn zero(sft: &Sft, k: usize, m: usize) -> Result<Self> {
        Self::constant(sft, k, vec![T::zero(); m])
    }

    pub fn k(&self) -> usize {
        self.recoded.k()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn base(&self) -> &Sft {
        self.recoded.base()
    }

    pub fn recoded(&self) -> &RecodedSft {
        &self.recoded
    }

    pub fn recoded_arc(&self) -> Arc<RecodedSft> {
        Arc::clone(&self.recoded)
    }

    pub fn value(&self, state: usize) -> &[T] {
        &self.values[state]
    }

    pub fn values(&self) -> &[Vec<T>] {
        &self.values
    }

    /// Scalar value of a state (first coordinate).
    pub fn scalar(&self, state: usize) -> &T {
        &self.values[state][0]
    }

    pub fn scalar_values(&self) -> Vec<T> {
        self.values.iter().map(|v| v[0].clone()).collect()
    }

    pub fn value_of_block(&self, block: &[usize]) -> Option<&[T]> {
        self.recoded.index_of(block).map(|i| self.value(i))
    }

    fn require_scalar(&self, what: &str) -> Result<()> {
        if self.m != 1 {
            return Err(Error::invalid(format!("{what} needs a scalar potential (m = 1), got m = {}", self.m)));
        }
        Ok(())
    }

    /// Constant extension to longer windows (`LC_k ⊂ LC_{k'}`).
    pub fn up_level(&self, k: usize) -> Result<Self> {
        if k < self.k() {
            return Err(Error::invalid(format!("cannot lower window from {} to {k}", self.k())));
        }
        if k == self.k() {
            return Ok(self.clone());
        }
        let kk = self.k();
        Self::from_fn(self.base(), k, |b| {
            self.value_of_block(&b[..kk]).expect("prefix of admissible block").to_vec()
        })
    }

    /// Apply `f` pointwise to the values.
    pub fn map<U: Scalar>(&self, f: impl Fn(&[T]) -> Vec<U>) -> Result<Potential<U>> {
        Potential::new(Arc::clone(&self.recoded), self.values.iter().map(|v| f(v)).collect())
    }

    pub fn to_float(&self) -> Potential<f64> {
        self.map(|v| v.iter().map(Scalar::to_f64).collect())
            .expect("same shape")
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.base() != other.base() {
            return Err(Error::invalid("potentials live on different shifts"));
        }
        if self.m != other.m {
            return Err(Error::invalid("potential dimensions differ"));
        }
        let k = self.k().max(other.k());
        let a = self.up_level(k)?;
        let b = other.up_level(k)?;
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| f(p, q)).collect())
            .collect();
        Potential::new(a.recoded_arc(), values)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.iter().map(|x| x.clone() * c.clone()).collect())
            .expect("same shape")
    }

    pub fn add_constant(&self, c: &T) -> Self {
        self.map(|v| v.iter().map(|x| x.clone() + c.clone()).collect())
            .expect("same shape")
    }

    /// `α·Φ = α₁Φ₁ + … + α_mΦ_m`.
    pub fn scalarize(&self, alpha: &[T]) -> Result<Self> {
        if alpha.len() != self.m {
            return Err(Error::invalid(format!(
                "direction has {} components, potential has {}",
                alpha.len(),
                self.m
            )));
        }
        self.map(|v| vec![dot(alpha, v)])
    }

    /// Coordinate `i` as a scalar potential.
    pub fn coordinate(&self, i: usize) -> Result<Self> {
        if i >= self.m {
            return Err(Error::invalid(format!("coordinate {i} out of range")));
        }
        self.map(|v| vec![v[i].clone()])
    }

    pub fn is_identically_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|x| x.is_zero()))
    }

    /// `φ ∘ σ` for a symbol permutation `σ` preserving the transition matrix.
    pub fn permuted(&self, sigma: &[usize]) -> Result<Self> {
        let values = self
            .recoded
            .states()
            .iter()
            .map(|b| {
                let img: Vec<usize> = b.iter().map(|&s| sigma[s]).collect();
                self.value_of_block(&img)
                    .map(<[T]>::to_vec)
                    .ok_or_else(|| Error::invalid("permutation does not preserve admissible blocks"))
            })
            .collect::<Result<Vec<_>>>()?;
        Potential::new(self.recoded_arc(), values)
    }

    pub fn to_file(&self) -> PotentialFile {
        PotentialFile {
            k: self.k(),
            m: self.m,
            values: (0..self.values.len())
                .map(|i| {
                    (
                        self.recoded.block_name(i),
                        self.values[i].iter().map(Scalar::to_text).collect(),
                    )
                })
                .collect(),
        }
    }
}

/// On-disk potential: `{"k": 2, "m": 1, "values": {"00": ["4"], ...}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PotentialFile {
    pub k: usize,
    pub m: usize,
    pub values: BTreeMap<String, Vec<String>>,
}

/// A potential loaded from text, in whichever mode its entries force.
#[derive(Clone, Debug)]
pub enum AnyPotential {
    Exact(Potential<Rational>),
    Float(Potential<f64>),
}

impl AnyPotential {
    pub fn is_exact(&self) -> bool {
        matches!(self, AnyPotential::Exact(_))
    }

    pub fn to_float(&self) -> Potential<f64> {
        match self {
            AnyPotential::Exact(p) => p.to_float(),
            AnyPotential::Float(p) => p.clone(),
        }
    }
}

impl PotentialFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Resolve against a shift. Every admissible block must be present and no
    /// other block may appear. All-rational files give exact potentials.
    pub fn resolve(&self, sft: &Sft) -> Result<AnyPotential> {
        let recoded = Arc::new(recode_to_one_step(sft, self.k)?);
        let mut parsed: Vec<Option<Vec<ParsedValue>>> = vec![None; recoded.num_states()];
        for (name, vals) in &self.values {
            let block = sft.parse_word(name)?;
            let id = recoded
                .index_of(&block)
                .ok_or_else(|| Error::invalid(format!("block '{name}' is not an admissible {}-block", self.k)))?;
            if vals.len() != self.m {
                return Err(Error::invalid(format!("block '{name}' has {} values, expected {}", vals.len(), self.m)));
            }
            parsed[id] = Some(vals.iter().map(|v| parse_value(v)).collect::<Result<_>>()?);
        }
        let parsed: Vec<Vec<ParsedValue>> = parsed
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::invalid(format!("missing value for block '{}'", recoded.block_name(i)))))
            .collect::<Result<_>>()?;
        let exact = parsed.iter().flatten().all(|v| matches!(v, ParsedValue::Exact(_)));
        if exact {
            let values = parsed
                .into_iter()
                .map(|v| {
                    v.into_iter()
                        .map(|x| match x {
                            ParsedValue::Exact(r) => r,
                            ParsedValue::Float(_) => unreachable!(),
                        })
                        .collect()
                })
                .collect();
            Ok(AnyPotential::Exact(Potential::new(recoded, values)?))
        } else {
            let values = parsed
                .into_iter()
                .map(|v| v.iter().map(ParsedValue::to_f64).collect())
                .collect();
            Ok(AnyPotential::Float(Potential::new(recoded, values)?))
        }
    }
}

/// Outcome of the cohomology decision.
#[derive(Clone, Debug)]
pub struct CohomologyReport<T: Scalar> {
    pub cohomologous: bool,
    /// The constant `K` with `φ − ψ ~ K`, when cohomologous.
    pub constant: Option<T>,
    /// Two orbits (indices) whose averages of `φ − ψ` differ.
    pub witness: Option<(usize, usize)>,
    /// Float mode only: averages agreed within tolerance but not exactly.
    pub tolerance_limited: bool,
}

/// Decide whether `φ − ψ` is cohomologous to a constant.
///
/// It suffices to compare the averages over all elementary orbits, which
/// must be enumerated at the larger of the two windows.
pub fn cohomology_test<T: Scalar>(
    phi: &Potential<T>,
    psi: &Potential<T>,
    orbits: &[ElementaryOrbit],
    tol: f64,
) -> Result<CohomologyReport<T>> {
    phi.require_scalar("cohomology test")?;
    psi.require_scalar("cohomology test")?;
    let diff = phi.sub(psi)?;
    if orbits.is_empty() {
        return Err(Error::invalid("no orbits supplied"));
    }
    if orbits.iter().any(|o| o.k != diff.k()) {
        return Err(Error::invalid(format!("orbits must be enumerated at k = {}", diff.k())));
    }
    let avgs: Vec<T> = orbits
        .iter()
        .map(|o| birkhoff_average(o, &diff).map(|v| v[0].clone()))
        .collect::<Result<_>>()?;
    let (imin, imax) = argminmax(&avgs);
    if avgs[imax].tie(&avgs[imin], tol) {
        let limited = !T::EXACT && avgs[imax] != avgs[imin];
        Ok(CohomologyReport {
            cohomologous: true,
            constant: Some(avgs[0].clone()),
            witness: None,
            tolerance_limited: limited,
        })
    } else {
        Ok(CohomologyReport {
            cohomologous: false,
            constant: None,
            witness: Some((imax.min(imin), imax.max(imin))),
            tolerance_limited: false,
        })
    }
}

fn argminmax<T: PartialOrd>(v: &[T]) -> (usize, usize) {
    let mut lo = 0;
    let mut hi = 0;
    for i in 1..v.len() {
        if v[i] < v[lo] {
            lo = i;
        }
        if v[i] > v[hi] {
            hi = i;
        }
    }
    (lo, hi)
}

pub fn cohomology_test_default<T: Scalar>(
    phi: &Potential<T>,
    psi: &Potential<T>,
    orbits: &[ElementaryOrbit],
) -> Result<CohomologyReport<T>> {
    cohomology_test(phi, psi, orbits, DEFAULT_TOL)
}

/// Indicator potential: the `i`-th `k`-cylinder maps to the `i`-th basis vector.
pub fn universal_potential(sft: &Sft, k: usize) -> Result<Potential<Rational>> {
    let recoded = Arc::new(recode_to_one_step(sft, k)?);
    let n = recoded.num_states();
    let values = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::from_integer(0.into()) })
                .collect()
        })
        .collect();
    Potential::new(recoded, values)
}

/// A scalar potential read off in the cylinder basis.
#[derive(Clone, Debug)]
pub struct EmbeddedDirection<T: Scalar> {
    /// `L(φ)`: the value on each `k`-cylinder.
    pub coordinates: Vec<T>,
    /// `‖L(φ)‖`.
    pub norm: f64,
    /// `I(φ) = L(φ)/‖L(φ)‖`.
    pub unit: Vec<f64>,
}

impl<T: Scalar> EmbeddedDirection<T> {
    /// `L(φ) · Φ_univ`, which equals `φ` exactly.
    pub fn reconstruct(&self, universal: &Potential<Rational>) -> Result<Potential<T>> {
        if universal.m() != self.coordinates.len() {
            return Err(Error::invalid("embedding and universal potential differ in dimension"));
        }
        let values = universal
            .values()
            .iter()
            .map(|e| {
                let s = e
                    .iter()
                    .zip(&self.coordinates)
                    .filter(|(b, _)| !num_traits::Zero::is_zero(*b))
                    .fold(T::zero(), |acc, (_, c)| acc + c.clone());
                vec![s]
            })
            .collect();
        Potential::new(universal.recoded_arc(), values)
    }

    pub fn reconstruct_float(&self, universal: &Potential<Rational>) -> Vec<f64> {
        universal
            .values()
            .iter()
            .map(|e| {
                self.norm
                    * e.iter()
                        .zip(&self.unit)
                        .map(|(b, u)| Scalar::to_f64(b) * u)
                        .sum::<f64>()
            })
            .collect()
    }
}

pub fn embed_direction<T: Scalar>(phi: &Potential<T>) -> Result<EmbeddedDirection<T>> {
    phi.require_scalar("embedding")?;
    if phi.is_identically_zero() {
        return Err(Error::invalid("the zero potential has no direction"));
    }
    let coordinates = phi.scalar_values();
    let norm = coordinates.iter().map(|c| c.to_f64().powi(2)).sum::<f64>().sqrt();
    let unit = coordinates.iter().map(|c| c.to_f64() / norm).collect();
    Ok(EmbeddedDirection {
        coordinates,
        norm,
        unit,
    })
}
