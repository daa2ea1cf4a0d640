//! Finite-support permutations of the positive integers.
//!
//! A [`Permutation`] stores a dense image table up to a support bound; every
//! integer beyond the bound is an implicit fixed point, so `S_k` embeds in
//! the infinite symmetric group transparently. Equality ignores trailing
//! fixed points.
//!
//! The group product is fixed to "rightmost factor acts first":
//! `(p · q)(m) = p(q(m))`. All constructions in this crate (notably the
//! star-transposition products behind `tau_pi`) rely on this convention.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("star-transposition index must be at least 1")]
    ZeroStarIndex,
    #[error("images of length {0} do not form a bijection of {{1,…,{0}}}")]
    NotBijection(usize),
    #[error("cycles must be disjoint and contain positive integers: {0}")]
    BadCycles(String),
    #[error("domain bound {bound} is smaller than the support bound {support}")]
    DomainTooSmall { bound: usize, support: usize },
    #[error("induced permutation needs a non-empty index set")]
    EmptyInducedSet,
    #[error("cannot parse cycle notation: {0}")]
    Parse(String),
}

/// A permutation of `ℕ = {1, 2, 3, …}` moving only finitely many points.
#[derive(Debug, Clone)]
pub struct Permutation {
    /// `images[m - 1]` is the image of `m`, for `1 ≤ m ≤ images.len()`.
    images: Vec<usize>,
}

impl Permutation {
    /// The identity (empty support).
    pub fn identity() -> Self {
        Permutation { images: Vec::new() }
    }

    /// Builds a permutation from a 1-based image table.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            if im == 0 || im > n || seen[im - 1] {
                return Err(PermError::NotBijection(n));
            }
            seen[im - 1] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[vec![1, 5, 3]]`.
    pub fn from_cycles(cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let bound = cycles.iter().flatten().copied().max().unwrap_or(0);
        let mut images: Vec<usize> = (1..=bound).collect();
        let mut seen = BTreeSet::new();
        for cycle in cycles {
            for &m in cycle {
                if m == 0 {
                    return Err(PermError::BadCycles("cycle contains 0".into()));
                }
                if !seen.insert(m) {
                    return Err(PermError::BadCycles(format!("{m} appears twice")));
                }
            }
            for (pos, &m) in cycle.iter().enumerate() {
                let next = cycle[(pos + 1) % cycle.len()];
                images[m - 1] = next;
            }
        }
        Ok(Permutation { images })
    }

    /// The star-transposition `γ_n = (1, n+1)`, defined for `n ≥ 1`.
    pub fn star_transposition(n: usize) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::ZeroStarIndex);
        }
        let mut images: Vec<usize> = (1..=n + 1).collect();
        images[0] = n + 1;
        images[n] = 1;
        Ok(Permutation { images })
    }

    /// The forward cycle `η_n = (1, 2, …, n)`; `η_1` is the identity.
    pub fn forward_cycle(n: usize) -> Self {
        assert!(n >= 1, "forward cycle needs n >= 1");
        let mut images: Vec<usize> = (2..=n).collect();
        images.push(1);
        Permutation { images }
    }

    /// Image of `m` (any positive integer).
    pub fn apply(&self, m: usize) -> usize {
        debug_assert!(m >= 1);
        if m <= self.images.len() {
            self.images[m - 1]
        } else {
            m
        }
    }

    /// Smallest bound `b` such that the stored table covers `{1,…,b}`.
    /// Points beyond it are fixed.
    pub fn support_bound(&self) -> usize {
        self.images.len()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| im == i + 1)
    }

    /// Group product under "rightmost acts first": `(p·q)(m) = p(q(m))`.
    pub fn compose(&self, q: &Permutation) -> Permutation {
        let bound = self.support_bound().max(q.support_bound());
        let images = (1..=bound).map(|m| self.apply(q.apply(m))).collect();
        Permutation { images }
    }

    /// Left-to-right product of a factor sequence, so the last factor acts
    /// first on points.
    pub fn product<'a, I>(factors: I) -> Permutation
    where
        I: IntoIterator<Item = &'a Permutation>,
    {
        factors
            .into_iter()
            .fold(Permutation::identity(), |acc, f| acc.compose(f))
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0usize; self.images.len()];
        for (m, &im) in self.images.iter().enumerate() {
            images[im - 1] = m + 1;
        }
        Permutation { images }
    }

    /// Decomposes `{1,…,domain_bound}` into orbits. Each orbit is listed
    /// starting from its minimum; orbits are sorted by minimum.
    pub fn orbits(&self, domain_bound: usize) -> Result<OrbitDecomposition, PermError> {
        let support = self.trimmed().len();
        if domain_bound < support {
            return Err(PermError::DomainTooSmall {
                bound: domain_bound,
                support,
            });
        }
        let mut visited = vec![false; domain_bound];
        let mut orbits = Vec::new();
        for start in 1..=domain_bound {
            if visited[start - 1] {
                continue;
            }
            let mut orbit = vec![start];
            visited[start - 1] = true;
            let mut m = self.apply(start);
            while m != start {
                visited[m - 1] = true;
                orbit.push(m);
                m = self.apply(m);
            }
            orbits.push(orbit);
        }
        Ok(OrbitDecomposition {
            orbits,
            domain_bound,
        })
    }

    /// The permutation induced on a finite set `a`: each element is sent to
    /// the first member of its forward orbit that lies in `a` again; points
    /// outside `a` are fixed.
    pub fn induced(&self, a: &BTreeSet<usize>) -> Result<Permutation, PermError> {
        if a.is_empty() {
            return Err(PermError::EmptyInducedSet);
        }
        let bound = *a.iter().max().unwrap();
        let mut images: Vec<usize> = (1..=bound).collect();
        for &m in a {
            let mut x = self.apply(m);
            while !a.contains(&x) {
                x = self.apply(x);
            }
            images[m - 1] = x;
        }
        Permutation::from_images(images)
    }

    /// Order of the permutation (lcm of its cycle lengths).
    pub fn order(&self) -> usize {
        let bound = self.support_bound().max(1);
        self.orbits(bound)
            .expect("bound covers support")
            .orbits()
            .iter()
            .fold(1usize, |acc, orbit| acc.lcm(&orbit.len()))
    }

    fn trimmed(&self) -> &[usize] {
        let mut n = self.images.len();
        while n > 0 && self.images[n - 1] == n {
            n -= 1;
        }
        &self.images[..n]
    }

    /// Parses cycle notation: `"(1,5,3)"`, `"(1,3,2)(5,6)"`, identity `"()"`.
    pub fn parse(text: &str) -> Result<Self, PermError> {
        let s = text.trim();
        if s.is_empty() {
            return Err(PermError::Parse("empty input".into()));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let Some(stripped) = rest.strip_prefix('(') else {
                return Err(PermError::Parse(format!("expected '(' at {rest:?}")));
            };
            let Some(close) = stripped.find(')') else {
                return Err(PermError::Parse("missing ')'".into()));
            };
            let body = &stripped[..close];
            rest = stripped[close + 1..].trim_start();
            if body.trim().is_empty() {
                continue; // "()" denotes the identity
            }
            let cycle = body
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<usize>()
                        .map_err(|_| PermError::Parse(format!("bad entry {tok:?}")))
                        .and_then(|m| {
                            if m == 0 {
                                Err(PermError::Parse("entries must be >= 1".into()))
                            } else {
                                Ok(m)
                            }
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(cycle);
        }
        Permutation::from_cycles(&cycles)
    }
}

impl PartialEq for Permutation {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl Eq for Permutation {}

impl Hash for Permutation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.trimmed().hash(state);
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation; nontrivial cycles sorted by their minimum, each
    /// starting at its minimum. The identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bound = self.support_bound();
        let decomposition = if bound == 0 {
            None
        } else {
            Some(self.orbits(bound).expect("bound covers support"))
        };
        let mut wrote = false;
        if let Some(d) = decomposition {
            for orbit in d.orbits() {
                if orbit.len() < 2 {
                    continue;
                }
                wrote = true;
                write!(f, "(")?;
                for (i, m) in orbit.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, ")")?;
            }
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Orbit decomposition of `{1,…,domain_bound}` under a permutation,
/// including fixed points as singleton orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    orbits: Vec<Vec<usize>>,
    domain_bound: usize,
}

impl OrbitDecomposition {
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn domain_bound(&self) -> usize {
        self.domain_bound
    }

    /// Orbit sizes in descending order (a multiset fingerprint).
    pub fn orbit_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.orbits.iter().map(Vec::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}
