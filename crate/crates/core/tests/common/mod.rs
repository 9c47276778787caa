#![allow(dead_code)]

use imago_core::algebra::BigRatio;
use imago_core::group::GroupSpec;
use imago_core::word::{Syllable, Word};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Groups of order at most 60, abelian and not.
pub fn small_groups() -> Vec<GroupSpec> {
    let mut v: Vec<GroupSpec> = [2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 24, 60]
        .into_iter()
        .map(|n| GroupSpec::cyclic(n).unwrap())
        .collect();
    v.push(GroupSpec::gl2(2).unwrap());
    v.push(GroupSpec::sl2(3).unwrap());
    v.push(GroupSpec::gl2(3).unwrap());
    v.push(GroupSpec::sl2(4).unwrap());
    v
}

pub fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

/// Random word on generators `1..=gens` with up to `max_len` syllables.
pub fn random_word(rng: &mut ChaCha8Rng, gens: u32, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    Word::from_syllables((0..len).map(|_| {
        let g = rng.gen_range(1..=gens);
        let mut e: i64 = rng.gen_range(-3..=3);
        if e == 0 {
            e = 1;
        }
        Syllable::new(g, e)
    }))
}

/// Random rational strictly between 0 and 1.
pub fn random_target(rng: &mut ChaCha8Rng) -> BigRatio {
    let den: u64 = rng.gen_range(2..1_000_000);
    let num: u64 = rng.gen_range(1..den);
    BigRatio::new(num, den).unwrap()
}
