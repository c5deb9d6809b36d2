//! Finite permutations of initial segments `{0, .., n-1}`.

use std::fmt;
use std::ops::Range;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("support mismatch: {left} vs {right}")]
    SupportMismatch { left: usize, right: usize },
    #[error("image list is not a bijection on {{0..{0}}}")]
    NotBijection(usize),
    #[error("permutations need a non-empty support")]
    EmptySupport,
    #[error("block {start}..{end} is not invariant")]
    BlockNotInvariant { start: usize, end: usize },
    #[error("block {start}..{end} lies outside a support of size {support}")]
    BlockOutOfRange { start: usize, end: usize, support: usize },
    #[error("element set lacks the identity")]
    MissingIdentity,
    #[error("cycle notation: {0}")]
    CycleSyntax(String),
}

/// A bijection on `{0, .., n-1}` stored as its image list.
///
/// Ordering is lexicographic on the image list, which is the order every
/// group in this crate keeps its elements in.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        if n == 0 {
            return Err(PermError::EmptySupport);
        }
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(PermError::NotBijection(n));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// # Panics
    /// If `n == 0`.
    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "permutation support must be non-empty");
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    /// Cyclic shift `i -> i + 1 mod n`, i.e. the cycle `(0 1 .. n-1)`.
    pub fn standard_cycle(n: usize) -> Self {
        assert!(n > 0, "permutation support must be non-empty");
        Permutation {
            images: (0..n as u32).map(|i| (i + 1) % n as u32).collect(),
        }
    }

    /// Builds a permutation from products of disjoint cycles, e.g. `(0 1)(2 3)`.
    /// The identity may be written `()`. Cycles must be disjoint.
    pub fn from_cycles(n: usize, text: &str) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::EmptySupport);
        }
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let Some(after_open) = rest.strip_prefix('(') else {
                return Err(PermError::CycleSyntax(format!("expected '(' at {rest:?}")));
            };
            let Some(close) = after_open.find(')') else {
                return Err(PermError::CycleSyntax("unclosed cycle".into()));
            };
            let body = &after_open[..close];
            let points = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| PermError::CycleSyntax(format!("bad point {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            for (idx, &p) in points.iter().enumerate() {
                if p >= n {
                    return Err(PermError::CycleSyntax(format!("point {p} outside support of size {n}")));
                }
                if touched[p] {
                    return Err(PermError::CycleSyntax(format!("point {p} repeated")));
                }
                touched[p] = true;
                images[p] = points[(idx + 1) % points.len()] as u32;
            }
            rest = after_open[close + 1..].trim_start();
        }
        Ok(Permutation { images })
    }

    /// Parses the one-line form `[i0 i1 .. i(n-1)]`.
    pub fn from_image_list(text: &str) -> Result<Self, PermError> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| PermError::CycleSyntax(format!("expected [..], got {text:?}")))?;
        let images = inner
            .split_whitespace()
            .map(|s| {
                s.parse::<u32>()
                    .map_err(|_| PermError::CycleSyntax(format!("bad image {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::new(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.len() != other.len() {
            return Err(PermError::SupportMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u32;
        }
        Permutation { images }
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, exp: i64) -> Permutation {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Permutation::identity(self.len());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose_unchecked(&sq);
            }
            sq = sq.compose_unchecked(&sq);
            e >>= 1;
        }
        acc
    }

    /// All cycles including fixed points, each starting at its least point,
    /// ordered by least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.apply(start);
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.apply(j);
            }
            out.push(cycle);
        }
        out
    }

    /// Least `m >= 1` with `self^m` the identity.
    pub fn order(&self) -> u64 {
        self.cycles().iter().map(|c| c.len() as u64).fold(1, lcm)
    }

    pub fn is_invariant(&self, block: &Range<usize>) -> bool {
        block.end <= self.len() && block.clone().all(|i| block.contains(&self.apply(i)))
    }

    /// Restriction to an invariant interval, re-indexed so the block starts at 0.
    pub fn restrict(&self, block: Range<usize>) -> Result<Permutation, PermError> {
        if block.start >= block.end || block.end > self.len() {
            return Err(PermError::BlockOutOfRange {
                start: block.start,
                end: block.end,
                support: self.len(),
            });
        }
        if !self.is_invariant(&block) {
            return Err(PermError::BlockNotInvariant {
                start: block.start,
                end: block.end,
            });
        }
        let offset = block.start as u32;
        Ok(Permutation {
            images: self.images[block].iter().map(|&v| v - offset).collect(),
        })
    }

    /// Restriction to the initial segment `{0, .., n-1}`.
    pub fn prefix(&self, n: usize) -> Result<Permutation, PermError> {
        self.restrict(0..n)
    }

    /// `self ⌢ other`: `other` acts on the points after `self`'s support.
    pub fn concat(&self, other: &Permutation) -> Permutation {
        let shift = self.len() as u32;
        let mut images = Vec::with_capacity(self.len() + other.len());
        images.extend_from_slice(&self.images);
        images.extend(other.images.iter().map(|&v| v + shift));
        Permutation { images }
    }

    /// Cycle notation listing every point, fixed points included: `(0)(1)(2 3)`.
    pub fn full_cycles(&self) -> String {
        let mut s = String::new();
        for c in self.cycles() {
            write_cycle(&mut s, &c);
        }
        s
    }

    /// The one-line dump form `[i0 i1 .. i(n-1)]`.
    pub fn image_list(&self) -> String {
        let parts: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
        format!("[{}]", parts.join(" "))
    }
}

fn write_cycle(s: &mut String, c: &[usize]) {
    s.push('(');
    for (i, p) in c.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(&p.to_string());
    }
    s.push(')');
}

/// Compact cycle notation; fixed points omitted and the identity printed as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for c in self.cycles().into_iter().filter(|c| c.len() > 1) {
            write_cycle(&mut s, &c);
        }
        if s.is_empty() {
            s.push_str("()");
        }
        f.write_str(&s)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self, self.len())
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
