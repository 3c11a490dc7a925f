//! Enumeration and face membership against brute force over periodic words.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thermoshift::max_face::maximizing_subshift;
use thermoshift::numeric::rat;
use thermoshift::orbits::{canonical_rotation, elementary_orbits};
use thermoshift::sft::is_transitive;
use thermoshift::{recode_to_one_step, Potential, Sft};

fn random_sft(rng: &mut ChaCha8Rng, d: usize) -> Sft {
    loop {
        let a: Vec<Vec<u8>> = (0..d).map(|_| (0..d).map(|_| u8::from(rng.gen_bool(0.6))).collect()).collect();
        if let Ok(s) = Sft::new(a, None) {
            if is_transitive(&s) {
                return s;
            }
        }
    }
}

/// All words of length `1..=n` over `d` symbols.
fn words(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer = vec![Vec::new()];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..d).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn cyclically_admissible(sft: &Sft, w: &[usize]) -> bool {
    (0..w.len()).all(|i| sft.allows(w[i], w[(i + 1) % w.len()]))
}

#[test]
fn elementary_orbits_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..60 {
        let d = rng.gen_range(1..=3);
        let sft = random_sft(&mut rng, d);
        for k in 1..=2 {
            let rec = recode_to_one_step(&sft, k).unwrap();
            let n = rec.num_states();
            // a word is k-elementary iff its cyclic k-windows are pairwise distinct
            let brute: BTreeSet<Vec<usize>> = words(d, n)
                .into_iter()
                .filter(|w| cyclically_admissible(&sft, w))
                .filter(|w| {
                    let windows: BTreeSet<Vec<usize>> =
                        (0..w.len()).map(|i| (0..k).map(|j| w[(i + j) % w.len()]).collect()).collect();
                    windows.len() == w.len()
                })
                .map(|w| canonical_rotation(&w))
                .collect();
            let orbits = elementary_orbits(&sft, k).unwrap();
            let got: BTreeSet<Vec<usize>> = orbits.iter().map(|o| o.segment.clone()).collect();
            assert_eq!(got.len(), orbits.len(), "duplicate orbits");
            assert_eq!(got, brute, "{:?} k={k}", sft.transition());
        }
    }
}

#[test]
fn face_membership_up_to_period_8() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let sft = random_sft(&mut rng, 3);
        let vals: Vec<i64> = (0..9).map(|_| rng.gen_range(-2..=2)).collect();
        let phi = Potential::from_fn(&sft, 2, |b| vec![rat(vals[b[0] * 3 + b[1]], 1)]).unwrap();
        let face = maximizing_subshift(&phi).unwrap();
        let rec = phi.recoded();
        for w in words(3, 8).into_iter().filter(|w| cyclically_admissible(&sft, w)) {
            let st: Vec<usize> = (0..w.len()).map(|i| rec.cyclic_window(&w, i).unwrap()).collect();
            let sum = st.iter().fold(rat(0, 1), |acc, &s| acc + phi.scalar(s));
            let on_face = sum / rat(w.len() as i64, 1) == face.beta;
            assert_eq!(face.contains_cycle(&st), on_face, "{w:?}");
        }
    }
}
