//! Named shifts and potentials used by the CLI and the tests.

use crate::error::{Error, Result};
use crate::numeric::{rat, Rational};
use crate::potential::Potential;
use crate::sft::Sft;

pub const SHIFT_NAMES: &[&str] = &["full2", "full3", "golden", "exB1", "exB3"];

pub const POTENTIAL_NAMES: &[&str] = &[
    "a1-1", "a1-2", "a1-3", "a1-4", "a1-5", "a1-6", "a1-7", "ex2b", "ex2c-1", "ex2c-2", "ex2c-3", "exB1", "exB3",
];

/// Six symbols: two blocks `{0,1}` and `{3,4}` joined through `2` and `5`.
pub fn example_b1_shift() -> Sft {
    let a = vec![
        vec![1, 1, 1, 0, 0, 0],
        vec![1, 1, 1, 0, 0, 0],
        vec![1, 1, 1, 1, 1, 1],
        vec![0, 0, 0, 1, 1, 1],
        vec![0, 0, 0, 1, 1, 1],
        vec![1, 1, 1, 1, 1, 1],
    ];
    Sft::new(a, None).expect("valid matrix")
}

/// Five symbols: a full 2-shift on `{0,1}` and fixed points `3`, `4`, all
/// joined through `2`.
pub fn example_b3_shift() -> Sft {
    let a = vec![
        vec![1, 1, 1, 0, 0],
        vec![1, 1, 1, 0, 0],
        vec![1, 1, 1, 1, 1],
        vec![0, 0, 1, 1, 0],
        vec![0, 0, 1, 0, 1],
    ];
    Sft::new(a, None).expect("valid matrix")
}

pub fn shift(name: &str) -> Result<Sft> {
    match name {
        "full2" => Ok(Sft::full(2)),
        "full3" => Ok(Sft::full(3)),
        "golden" => Ok(Sft::golden_mean()),
        "exB1" => Ok(example_b1_shift()),
        "exB3" => Ok(example_b3_shift()),
        _ => Err(Error::invalid(format!("unknown builtin shift {name:?}"))),
    }
}

fn matrix(m: &[&[i64]]) -> Vec<Vec<Rational>> {
    m.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()
}

/// `Φ` on 2-blocks of `example_b1_shift`, valued in the triangle `(0,0), (1,0), (1/2,1)`.
pub fn example_b1_potential() -> Potential<Rational> {
    let s = example_b1_shift();
    Potential::from_fn(&s, 2, |b| match (b[0], b[1]) {
        (0, 0) | (0, 1) | (1, 0) | (4, 4) => vec![rat(0, 1), rat(0, 1)],
        (3, 3) | (3, 4) | (4, 3) | (1, 1) => vec![rat(1, 1), rat(0, 1)],
        _ => vec![rat(1, 2), rat(1, 1)],
    })
    .expect("valid potential")
}

/// Point components at `(0,0)`, `(1/2,0)` and `(1,0)` with the middle one of
/// entropy `log 2`, the others periodic.
pub fn example_b3_potential() -> Potential<Rational> {
    let s = example_b3_shift();
    Potential::from_fn(&s, 2, |b| match (b[0], b[1]) {
        (x, y) if x < 2 && y < 2 => vec![rat(1, 2), rat(0, 1)],
        (3, 3) => vec![rat(0, 1), rat(0, 1)],
        (4, 4) => vec![rat(1, 1), rat(0, 1)],
        _ => vec![rat(1, 2), rat(1, 1)],
    })
    .expect("valid potential")
}

/// A named potential together with its shift.
pub fn potential(name: &str) -> Result<(Sft, Potential<Rational>)> {
    let on_matrix = |s: Sft, m: &[&[i64]]| -> Result<(Sft, Potential<Rational>)> {
        let p = Potential::from_matrix(&s, &matrix(m))?;
        Ok((s, p))
    };
    let full2 = Sft::full(2);
    let full3 = Sft::full(3);
    match name {
        "a1-1" => on_matrix(full2, &[&[1, 0], &[0, 0]]),
        "a1-2" => on_matrix(full2, &[&[0, 0], &[0, 1]]),
        "a1-3" => on_matrix(full2, &[&[0, 1], &[1, 0]]),
        "a1-4" => on_matrix(full2, &[&[0, 1], &[-1, 0]]),
        "a1-5" => on_matrix(full2, &[&[1, 2], &[0, 0]]),
        "a1-6" => on_matrix(full2, &[&[0, 2], &[0, 1]]),
        "a1-7" => on_matrix(full2, &[&[1, 0], &[0, 1]]),
        "ex2b" => on_matrix(full3, &[&[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]),
        "ex2c-1" => on_matrix(full3, &[&[4, 0, 0], &[1, 4, 0], &[1, 0, 4]]),
        "ex2c-2" => on_matrix(full3, &[&[4, 0, 0], &[0, 4, 0], &[0, 0, 4]]),
        "ex2c-3" => on_matrix(full3, &[&[4, 0, 0], &[1, 4, 0], &[0, 0, 4]]),
        "exB1" => Ok((example_b1_shift(), example_b1_potential())),
        "exB3" => Ok((example_b3_shift(), example_b3_potential())),
        _ => Err(Error::invalid(format!("unknown builtin potential {name:?}"))),
    }
}
