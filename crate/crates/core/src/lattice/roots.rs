//! The supported root systems and the generator tables they induce.
//!
//! Roots are stored as the positive representatives only (first nonzero
//! coordinate positive), ordered lexicographically descending so that the
//! cubic generators come out as e1, e2, e3. The full root set is the
//! representatives together with their negatives.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Integer embedding coordinates. 2D systems use z = 0 throughout.
pub type Coords = [i64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootSystemKind {
    A3,
    B3,
    C3,
    Square2D,
    Cubic3D,
}

/// Reducible combinations the construction explicitly refuses.
const REDUCIBLE: &[&str] = &["a1a1a1", "a1+a1+a1", "a1a2", "a1+a2", "a1b2", "a1+b2", "a1g2", "a1+g2"];

impl RootSystemKind {
    pub fn from_name(name: &str) -> Result<Self> {
        let n = name.to_ascii_lowercase();
        match n.as_str() {
            "a3" => Ok(Self::A3),
            "b3" => Ok(Self::B3),
            "c3" => Ok(Self::C3),
            "square" | "square2d" => Ok(Self::Square2D),
            "cubic" | "cubic3d" => Ok(Self::Cubic3D),
            _ if REDUCIBLE.contains(&n.as_str()) => Err(Error::ReducibleSystem(name.to_string())),
            _ => Err(Error::UnsupportedSystem(name.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::A3 => "a3",
            Self::B3 => "b3",
            Self::C3 => "c3",
            Self::Square2D => "square2d",
            Self::Cubic3D => "cubic3d",
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            Self::Square2D => 2,
            _ => 3,
        }
    }

}

impl fmt::Display for RootSystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A root system together with its generator table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    kind: RootSystemKind,
    generators: Vec<Coords>,
}

impl RootSystem {
    pub fn new(kind: RootSystemKind) -> Self {
        let mut generators = match kind {
            RootSystemKind::A3 => short_pairs(),
            RootSystemKind::B3 => {
                let mut g = vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]];
                g.extend(short_pairs());
                g
            }
            RootSystemKind::C3 => {
                let mut g = vec![[2, 0, 0], [0, 2, 0], [0, 0, 2]];
                g.extend(short_pairs());
                g
            }
            RootSystemKind::Square2D => vec![[1, 0, 0], [0, 1, 0]],
            RootSystemKind::Cubic3D => vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        };
        generators.sort_by(|a, b| b.cmp(a));
        Self { kind, generators }
    }

    pub fn kind(&self) -> RootSystemKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.kind.dimension()
    }

    /// Number of labelled generators x_1..x_k (half the root count).
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// The positive representative root of generator `index` (0-based).
    pub fn generator(&self, index: usize) -> Result<Coords> {
        self.generators.get(index).copied().ok_or_else(|| Error::GeneratorOutOfRange {
            index,
            system: self.kind.name().to_string(),
            count: self.generators.len(),
        })
    }

    pub fn generators(&self) -> &[Coords] {
        &self.generators
    }

    /// All roots: each generator and its negative.
    pub fn roots(&self) -> Vec<Coords> {
        let mut out = Vec::with_capacity(self.generators.len() * 2);
        for g in &self.generators {
            out.push(*g);
            out.push([-g[0], -g[1], -g[2]]);
        }
        out
    }
}

/// The 6 positive representatives of {±e_i ± e_j, i < j}.
fn short_pairs() -> Vec<Coords> {
    let mut out = Vec::with_capacity(6);
    for i in 0..3usize {
        for j in (i + 1)..3 {
            for s in [1i64, -1] {
                let mut v = [0i64; 3];
                v[i] = 1;
                v[j] = s;
                out.push(v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts_match_coordination_numbers() {
        assert_eq!(RootSystem::new(RootSystemKind::A3).roots().len(), 12);
        assert_eq!(RootSystem::new(RootSystemKind::B3).roots().len(), 18);
        assert_eq!(RootSystem::new(RootSystemKind::C3).roots().len(), 18);
        assert_eq!(RootSystem::new(RootSystemKind::Square2D).roots().len(), 4);
        assert_eq!(RootSystem::new(RootSystemKind::Cubic3D).roots().len(), 6);
    }

    #[test]
    fn roots_come_in_pairs_without_zero_or_duplicates() {
        for kind in [
            RootSystemKind::A3,
            RootSystemKind::B3,
            RootSystemKind::C3,
            RootSystemKind::Square2D,
            RootSystemKind::Cubic3D,
        ] {
            let roots = RootSystem::new(kind).roots();
            let set: std::collections::BTreeSet<_> = roots.iter().copied().collect();
            assert_eq!(set.len(), roots.len(), "{kind}: duplicate roots");
            assert!(!set.contains(&[0, 0, 0]), "{kind}: zero root");
            for r in &roots {
                assert!(set.contains(&[-r[0], -r[1], -r[2]]), "{kind}: {r:?} lacks its negative");
            }
        }
    }

    #[test]
    fn cubic_generator_order_is_axis_order() {
        let s = RootSystem::new(RootSystemKind::Cubic3D);
        assert_eq!(s.generator(0).unwrap(), [1, 0, 0]);
        assert_eq!(s.generator(1).unwrap(), [0, 1, 0]);
        assert_eq!(s.generator(2).unwrap(), [0, 0, 1]);
    }

    #[test]
    fn reducible_names_are_rejected() {
        for name in ["a1a1a1", "a1a2", "a1b2", "a1g2"] {
            match RootSystemKind::from_name(name) {
                Err(Error::ReducibleSystem(_)) => {}
                other => panic!("expected reducible rejection for {name}, got {other:?}"),
            }
        }
        assert!(matches!(
            RootSystemKind::from_name("e8"),
            Err(Error::UnsupportedSystem(_))
        ));
    }

    #[test]
    fn out_of_range_generator_errors() {
        let s = RootSystem::new(RootSystemKind::Square2D);
        assert!(s.generator(2).is_err());
    }
}
