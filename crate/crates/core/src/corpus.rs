//! Seeded generators for test and demo inputs. The same seed always yields
//! the same numbers.

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cf::{ContinuedFraction, QuadraticSurd};
use crate::perm::Member;
use crate::structure::{scan_coincidences, Verdict};

pub const SCREEN_DEPTH: usize = 48;
pub const CORPUS_SIZE: usize = 30;
pub const CORPUS_SIZES: [usize; 4] = [2, 3, 4, 5];

const RADICANDS: [u64; 24] = [
    2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30, 31, 33, 34, 35, 37, 41,
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `[a_0; pre, (period)]` with `a_0 ∈ [0, 3]`, other quotients in
/// `[1, 9]`, preperiod of length ≤ 3 and period of length 1 to 4.
pub fn random_periodic_cf(rng: &mut impl Rng) -> ContinuedFraction {
    let a0: i64 = rng.gen_range(0..=3);
    let pre: Vec<u64> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(1..=9)).collect();
    let period: Vec<u64> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(1..=9)).collect();
    ContinuedFraction::periodic(a0, &pre, &period).expect("positive quotients")
}

/// `r + s√D` with small rational parts and a square-free `D ≤ 41`.
pub fn random_surd(rng: &mut impl Rng) -> QuadraticSurd {
    let d = *RADICANDS.choose(rng).expect("nonempty");
    let r = BigRational::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=4).into());
    let mut num: i64 = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        num = -num;
    }
    let s = BigRational::new(num.into(), rng.gen_range(1i64..=3).into());
    QuadraticSurd::new(r, s, d).expect("square-free radicand")
}

fn independent(a: &ContinuedFraction, b: &ContinuedFraction) -> bool {
    scan_coincidences(a, b, SCREEN_DEPTH).is_ok_and(|log| log.verdict == Verdict::IndependentLikely)
}

/// A pair of surds whose screening verdict is `INDEPENDENT_LIKELY`.
pub fn random_independent_surd_pair(rng: &mut impl Rng) -> (Member, Member) {
    loop {
        let (x, y) = (random_surd(rng), random_surd(rng));
        let (Ok(a), Ok(b)) = (Member::from_surd("x1", x), Member::from_surd("x2", y)) else {
            continue;
        };
        if independent(&a.cf, &b.cf) {
            return (a, b);
        }
    }
}

/// `n` periodic members, pairwise `INDEPENDENT_LIKELY`.
pub fn random_tuple(rng: &mut impl Rng, n: usize) -> Vec<Member> {
    let mut members: Vec<Member> = Vec::with_capacity(n);
    while members.len() < n {
        let cf = random_periodic_cf(rng);
        if members.iter().all(|m| independent(&m.cf, &cf)) {
            members.push(Member::from_cf(format!("x{}", members.len() + 1), cf));
        }
    }
    members
}

/// `CORPUS_SIZE` tuples cycling through sizes 2 to 5.
pub fn regression_corpus(seed: u64) -> Vec<Vec<Member>> {
    let mut rng = rng(seed);
    (0..CORPUS_SIZE)
        .map(|i| random_tuple(&mut rng, CORPUS_SIZES[i % CORPUS_SIZES.len()]))
        .collect()
}
