//! Permutations of arc labels.
//!
//! A [`LabelPermutation`] stores only the labels it moves, so the identity is
//! the empty map and two permutations compare equal exactly when they act
//! identically. Composition is written left to right to match the order in
//! which generators of a flip word are applied: `p.then(&q)` first applies
//! `p`, then `q`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutationError {
    #[error("label {0} appears more than once")]
    RepeatedLabel(u32),
    #[error("label 0 is not a valid arc label")]
    ZeroLabel,
    #[error("rows have different lengths ({0} vs {1})")]
    RowLengthMismatch(usize, usize),
    #[error("two-row notation is not a bijection")]
    NotABijection,
    #[error("cannot parse permutation `{0}`")]
    Syntax(String),
}

/// A bijection on arc labels that fixes all but finitely many labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelPermutation {
    moved: BTreeMap<u32, u32>,
}

impl LabelPermutation {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn transposition(a: u32, b: u32) -> Self {
        let mut p = Self::identity();
        if a != b {
            p.moved.insert(a, b);
            p.moved.insert(b, a);
        }
        p
    }

    /// Builds the product of the given cycles. Cycles must be disjoint.
    pub fn from_cycles(cycles: &[Vec<u32>]) -> Result<Self, PermutationError> {
        let mut moved = BTreeMap::new();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x == 0 {
                    return Err(PermutationError::ZeroLabel);
                }
                let y = cycle[(i + 1) % cycle.len()];
                if moved.insert(x, y).is_some() {
                    return Err(PermutationError::RepeatedLabel(x));
                }
            }
        }
        moved.retain(|k, v| k != v);
        Ok(Self { moved })
    }

    /// Two-row notation: `top[i]` is sent to `bottom[i]`.
    pub fn from_two_row(top: &[u32], bottom: &[u32]) -> Result<Self, PermutationError> {
        if top.len() != bottom.len() {
            return Err(PermutationError::RowLengthMismatch(top.len(), bottom.len()));
        }
        let mut moved = BTreeMap::new();
        for (&x, &y) in top.iter().zip(bottom) {
            if x == 0 || y == 0 {
                return Err(PermutationError::ZeroLabel);
            }
            if moved.insert(x, y).is_some() {
                return Err(PermutationError::RepeatedLabel(x));
            }
        }
        let mut images: Vec<u32> = moved.values().copied().collect();
        images.sort_unstable();
        let domain: Vec<u32> = moved.keys().copied().collect();
        if images != domain {
            return Err(PermutationError::NotABijection);
        }
        moved.retain(|k, v| k != v);
        Ok(Self { moved })
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.moved.get(&x).copied().unwrap_or(x)
    }

    pub fn is_identity(&self) -> bool {
        self.moved.is_empty()
    }

    /// Labels moved by the permutation, in increasing order.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.moved.keys().copied()
    }

    pub fn max_label(&self) -> u32 {
        self.moved.keys().next_back().copied().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        Self {
            moved: self.moved.iter().map(|(&k, &v)| (v, k)).collect(),
        }
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Self) -> Self {
        let mut moved = BTreeMap::new();
        for x in self.support().chain(other.support()) {
            let y = other.apply(self.apply(x));
            if x != y {
                moved.insert(x, y);
            }
        }
        Self { moved }
    }

    /// Conjugate `p ↦ self⁻¹ · p · self` in left-to-right order, i.e. the
    /// permutation `x ↦ self(p(self⁻¹(x)))`.
    pub fn conjugate(&self, p: &Self) -> Self {
        self.inverse().then(p).then(self)
    }

    /// Disjoint cycle decomposition, each cycle starting at its smallest label,
    /// cycles ordered by that label.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.moved.keys() {
            if !seen.insert(start) {
                continue;
            }
            let mut cycle = vec![start];
            let mut x = self.apply(start);
            while x != start {
                seen.insert(x);
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for LabelPermutation {
    /// Cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "()");
        }
        for cycle in self.cycles() {
            write!(f, "(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl FromStr for LabelPermutation {
    type Err = PermutationError;

    /// Parses cycle notation such as `(2 4)(1 7 3)`. Cycles are composed left
    /// to right, so overlapping cycles are accepted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || PermutationError::Syntax(s.to_string());
        let mut rest = s.trim();
        let mut acc = Self::identity();
        while !rest.is_empty() {
            let body_start = rest.strip_prefix('(').ok_or_else(syntax)?;
            let close = body_start.find(')').ok_or_else(syntax)?;
            let body = &body_start[..close];
            let labels = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|_| syntax()))
                .collect::<Result<Vec<_>, _>>()?;
            if !labels.is_empty() {
                acc = acc.then(&Self::from_cycles(&[labels])?);
            }
            rest = body_start[close + 1..].trim_start();
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_round_trip() {
        let p: LabelPermutation = "(2 4)(1 7 3)".parse().unwrap();
        assert_eq!(p.apply(1), 7);
        assert_eq!(p.apply(3), 1);
        assert_eq!(p.apply(5), 5);
        assert_eq!(p.to_string(), "(1 7 3)(2 4)");
        assert_eq!(p.to_string().parse::<LabelPermutation>().unwrap(), p);
        assert_eq!("()".parse::<LabelPermutation>().unwrap(), LabelPermutation::identity());
    }

    #[test]
    fn two_row_matches_cycles() {
        let p = LabelPermutation::from_two_row(&[1, 2, 3, 4, 5], &[5, 1, 2, 3, 4]).unwrap();
        assert_eq!(p.to_string(), "(1 5 4 3 2)");
        assert!(LabelPermutation::from_two_row(&[1, 2], &[2, 3]).is_err());
        assert!(LabelPermutation::from_two_row(&[1, 1], &[1, 1]).is_err());
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = LabelPermutation::transposition(1, 2);
        let b = LabelPermutation::transposition(2, 3);
        let ab = a.then(&b);
        // 1 -> 2 -> 3
        assert_eq!(ab.apply(1), 3);
        assert!(ab.then(&ab.inverse()).is_identity());
        let overlapping: LabelPermutation = "(1 2)(2 3)".parse().unwrap();
        assert_eq!(overlapping, ab);
    }

    #[test]
    fn conjugation_relabels_cycles() {
        let s = LabelPermutation::transposition(1, 5);
        let p: LabelPermutation = "(1 2 3)".parse().unwrap();
        assert_eq!(s.conjugate(&p).to_string(), "(2 3 5)");
    }
}
