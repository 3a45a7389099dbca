//! Right-angled Coxeter presentations, normal forms and sphere enumeration.
//!
//! Generators are stored 0-based. Every textual form (JSON, word strings,
//! reports) is 1-based.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order of `γ_i γ_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    One,
    Two,
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoxeterGraph {
    k: usize,
    infinite: Vec<bool>,
}

/// JSON form of a graph: unlisted off-diagonal pairs commute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub k: usize,
    pub infinite_edges: Vec<[usize; 2]>,
}

impl CoxeterGraph {
    /// Graph on `k` generators with the given 0-based infinite-order pairs.
    pub fn new(k: usize, infinite_edges: &[(usize, usize)]) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidGraph("k must be at least 1".into()));
        }
        let mut infinite = vec![false; k * k];
        for &(i, j) in infinite_edges {
            if i >= k || j >= k {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) out of range",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("loop at generator {}", i + 1)));
            }
            infinite[i * k + j] = true;
            infinite[j * k + i] = true;
        }
        Ok(Self { k, infinite })
    }

    pub fn from_spec(spec: &GraphSpec) -> Result<Self> {
        let edges: Vec<(usize, usize)> = spec
            .infinite_edges
            .iter()
            .map(|&[i, j]| {
                if i == 0 || j == 0 {
                    Err(Error::InvalidGraph("generators are numbered from 1".into()))
                } else {
                    Ok((i - 1, j - 1))
                }
            })
            .collect::<Result<_>>()?;
        Self::new(spec.k, &edges)
    }

    pub fn to_spec(&self) -> GraphSpec {
        let mut infinite_edges = Vec::new();
        for i in 0..self.k {
            for j in i + 1..self.k {
                if self.is_infinite(i, j) {
                    infinite_edges.push([i + 1, j + 1]);
                }
            }
        }
        GraphSpec {
            k: self.k,
            infinite_edges,
        }
    }

    /// All pairs of infinite order.
    pub fn free(k: usize) -> Result<Self> {
        let edges: Vec<_> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect();
        Self::new(k, &edges)
    }

    /// Right-angled k-gon: cyclically consecutive generators commute.
    pub fn cycle(k: usize) -> Result<Self> {
        let edges: Vec<_> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .filter(|&(i, j)| !(j == i + 1 || (i == 0 && j == k - 1)))
            .collect();
        Self::new(k, &edges)
    }

    /// All pairs commute.
    pub fn complete2(k: usize) -> Result<Self> {
        Self::new(k, &[])
    }

    /// Parses a preset name such as `cycle(5)` or an inline JSON graph.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('{') {
            let spec: GraphSpec =
                serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph JSON: {e}")))?;
            return Self::from_spec(&spec);
        }
        let (name, rest) = text
            .split_once('(')
            .ok_or_else(|| Error::Parse(format!("unknown graph {text:?}")))?;
        let k: usize = rest
            .strip_suffix(')')
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad generator count in {text:?}")))?;
        match name.trim() {
            "free" => Self::free(k),
            "cycle" => Self::cycle(k),
            "complete2" => Self::complete2(k),
            other => Err(Error::Parse(format!("unknown preset {other:?}"))),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_infinite(&self, i: usize, j: usize) -> bool {
        self.infinite[i * self.k + j]
    }

    /// Distinct commuting generators.
    pub fn commutes(&self, i: usize, j: usize) -> bool {
        i != j && !self.is_infinite(i, j)
    }

    pub fn order(&self, i: usize, j: usize) -> Order {
        if i == j {
            Order::One
        } else if self.is_infinite(i, j) {
            Order::Infinite
        } else {
            Order::Two
        }
    }

    /// Whether the infinite-order edges connect all generators.
    pub fn is_irreducible(&self) -> bool {
        let mut seen = vec![false; self.k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..self.k {
                if !seen[j] && self.is_infinite(i, j) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Canonical JSON text, used for hashing.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("graph spec serializes")
    }

    pub fn normal_form(&self, word: &Word) -> NormalForm {
        for &a in &word.0 {
            assert!(
                a < self.k,
                "letter {} out of range for k = {}",
                a + 1,
                self.k
            );
        }
        let reduced = self.reduce(&word.0);
        NormalForm(self.lex_least(reduced))
    }

    /// Free reduction modulo commutations: a new letter cancels the last equal
    /// letter when everything after it commutes with it.
    fn reduce(&self, letters: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::with_capacity(letters.len());
        for &a in letters {
            let mut cancel = None;
            for (j, &b) in out.iter().enumerate().rev() {
                if b == a {
                    cancel = Some(j);
                    break;
                }
                if !self.commutes(a, b) {
                    break;
                }
            }
            match cancel {
                Some(j) => {
                    out.remove(j);
                }
                None => out.push(a),
            }
        }
        out
    }

    /// Lexicographically least word in the commutation class of a reduced word.
    fn lex_least(&self, mut rest: Vec<usize>) -> Vec<usize> {
        let mut out = Vec::with_capacity(rest.len());
        while !rest.is_empty() {
            let mut best: Option<usize> = None;
            for p in 0..rest.len() {
                let x = rest[p];
                if best.is_some_and(|b| rest[b] <= x) {
                    continue;
                }
                if rest[..p].iter().all(|&y| self.commutes(x, y)) {
                    best = Some(p);
                }
            }
            let p = best.expect("the first letter is always available");
            out.push(rest.remove(p));
        }
        out
    }

    /// Distinct elements of word length exactly `length`.
    pub fn enumerate_sphere(&self, length: usize, budget: usize) -> Result<Vec<NormalForm>> {
        let mut spheres = self.spheres(budget);
        let mut last = Vec::new();
        for _ in 0..=length {
            last = spheres.next().expect("sphere iterator is infinite")?;
        }
        Ok(last)
    }

    /// Spheres of length `0..=max_length`.
    pub fn enumerate_ball(&self, max_length: usize, budget: usize) -> Result<Vec<Vec<NormalForm>>> {
        self.spheres(budget).take(max_length + 1).collect()
    }

    /// Spheres of increasing length, each sorted in ShortLex order.
    pub fn spheres(&self, budget: usize) -> SphereIter<'_> {
        SphereIter {
            graph: self,
            current: None,
            length: 0,
            budget,
            failed: false,
        }
    }
}

/// Arbitrary word in the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        Self(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Parses 1-based letters separated by `.`, `,` or spaces; `e` or empty is the identity.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "e" {
            return Ok(Self::identity());
        }
        text.split(['.', ',', ' '])
            .filter(|s| !s.is_empty())
            .map(|s| match s.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n - 1),
                _ => Err(Error::Parse(format!("bad letter {s:?} in word {text:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.0.iter().map(|a| (a + 1).to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Reduced, ShortLex-least representative of a group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm(Vec<usize>);

impl NormalForm {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word(self.0.clone())
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_word().fmt(f)
    }
}

impl Ord for NormalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for NormalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Breadth-first sphere enumeration; yields an error once and then stops.
pub struct SphereIter<'g> {
    graph: &'g CoxeterGraph,
    current: Option<Vec<NormalForm>>,
    length: usize,
    budget: usize,
    failed: bool,
}

impl Iterator for SphereIter<'_> {
    type Item = Result<Vec<NormalForm>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let next = match &self.current {
            None => vec![NormalForm::identity()],
            Some(prev) => {
                let mut set = BTreeSet::new();
                for w in prev {
                    for s in 0..self.graph.k {
                        let mut letters = w.0.clone();
                        letters.push(s);
                        let nf = self.graph.normal_form(&Word(letters));
                        if nf.len() == self.length {
                            set.insert(nf);
                            if set.len() > self.budget {
                                self.failed = true;
                                return Some(Err(Error::SphereTooLarge {
                                    length: self.length,
                                    budget: self.budget,
                                }));
                            }
                        }
                    }
                }
                set.into_iter().collect()
            }
        };
        self.length += 1;
        self.current = Some(next.clone());
        Some(Ok(next))
    }
}
