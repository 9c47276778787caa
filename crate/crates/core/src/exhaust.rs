//! Exhaustive evaluation over tuple spaces, optionally split across workers.

use rayon::prelude::*;

/// Fixed-size set of small integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Bitset {
    words: Vec<u64>,
    len: usize,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    #[inline]
    pub fn insert(&mut self, i: u32) {
        self.words[i as usize / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, i: u32) -> bool {
        self.words[i as usize / 64] & (1 << (i % 64)) != 0
    }

    #[cfg(test)]
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len as u32).filter(|&i| self.contains(i))
    }
}

/// Collects `eval(t)` for every tuple `t` of length `k` whose first entry is
/// drawn from `firsts` and whose other entries range over `0..n`.
///
/// Tuples are visited in mixed-radix order with the first coordinate most
/// significant. The work is split on the first two coordinates; since the
/// partial sets are merged by union, the result does not depend on `workers`.
pub(crate) fn exhaust<F>(n: usize, k: usize, firsts: &[u32], workers: usize, eval: F) -> Bitset
where
    F: Fn(&[u32]) -> u32 + Sync,
{
    let mut out = Bitset::new(n);
    if k == 0 {
        out.insert(eval(&[]));
        return out;
    }
    let inner = if k >= 2 { n } else { 1 };
    let outer = firsts.len() * inner;

    let run_block = |acc: &mut Bitset, buf: &mut Vec<u32>, o: usize| {
        buf[0] = firsts[o / inner];
        if k >= 2 {
            buf[1] = (o % inner) as u32;
        }
        for v in buf.iter_mut().skip(2) {
            *v = 0;
        }
        loop {
            acc.insert(eval(buf));
            let mut i = k;
            loop {
                if i <= 2 {
                    return;
                }
                i -= 1;
                buf[i] += 1;
                if (buf[i] as usize) < n {
                    break;
                }
                buf[i] = 0;
            }
        }
    };

    let pool = (workers > 1)
        .then(|| rayon::ThreadPoolBuilder::new().num_threads(workers).build().ok())
        .flatten();
    match pool {
        Some(pool) => pool.install(|| {
            (0..outer)
                .into_par_iter()
                .fold(
                    || (Bitset::new(n), vec![0u32; k]),
                    |(mut acc, mut buf), o| {
                        run_block(&mut acc, &mut buf, o);
                        (acc, buf)
                    },
                )
                .map(|(acc, _)| acc)
                .reduce(
                    || Bitset::new(n),
                    |mut a, b| {
                        a.union_with(&b);
                        a
                    },
                )
        }),
        None => {
            let mut buf = vec![0u32; k];
            for o in 0..outer {
                run_block(&mut out, &mut buf, o);
            }
            out
        }
    }
}
