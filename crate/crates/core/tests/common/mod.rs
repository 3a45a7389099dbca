#![allow(dead_code)]

use proptest::prelude::*;
use racg_core::coxeter::{CoxeterGraph, Word};
use racg_core::exact::{rat, Rational};

/// Graph on `k_lo..=k_hi` generators from a bit mask over the pairs.
pub fn graph_strategy(k_lo: usize, k_hi: usize) -> impl Strategy<Value = CoxeterGraph> {
    (k_lo..=k_hi, prop::collection::vec(prop::bool::ANY, 28)).prop_map(|(k, bits)| {
        let mut edges = Vec::new();
        let mut it = bits.into_iter();
        for i in 0..k {
            for j in i + 1..k {
                if it.next().unwrap_or(true) {
                    edges.push((i, j));
                }
            }
        }
        CoxeterGraph::new(k, &edges).unwrap()
    })
}

pub fn word_strategy(max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..64, 0..=max_len)
}

pub fn to_word(letters: &[usize], k: usize) -> Word {
    Word(letters.iter().map(|x| x % k).collect())
}

/// Rationals in `[lo, hi]` with denominators up to 12.
pub fn rational_in(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (0i64..=1200, 1i64..=12).prop_map(move |(n, d)| rat(lo * d + n * (hi - lo) * d / 1200, d))
}

pub fn named(name: &str) -> CoxeterGraph {
    CoxeterGraph::parse(name).unwrap()
}
