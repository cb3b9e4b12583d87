//! The path-word alphabet and its combinatorial invariants: free and cyclic
//! reduction, displacement vectors, rotation charge, and canonical text form.
//!
//! Letters are spatial generators x_i^±1 (optionally refined to scale 1/2^n),
//! full tadpole rotations S^±1, and half rotations t^±1. The text format is
//! whitespace-separated tokens: `x1 x1' S S' t t'`, with `@n` marking the
//! refinement level (`x2@3`) and a trailing apostrophe marking the inverse;
//! the prefix token `cyc:` marks a cyclic word.

mod walk;

pub use walk::{validate_fermionic, walk, FermionicMode, WalkState};

use crate::error::{Error, Result};
use crate::lattice::RootSystem;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Letter {
    /// Lattice generator x_{generator+1}, at formal scale 1/2^level.
    Spatial { generator: u8, sign: Sign, level: u8 },
    /// Full rotation S of the compact dimension.
    Tadpole { sign: Sign },
    /// Half rotation t along the projective line; S = tt.
    HalfRotation { sign: Sign },
}

impl Letter {
    pub fn spatial(generator: u8, sign: Sign) -> Self {
        Letter::Spatial { generator, sign, level: 0 }
    }

    pub fn inverse(self) -> Self {
        match self {
            Letter::Spatial { generator, sign, level } => {
                Letter::Spatial { generator, sign: sign.flip(), level }
            }
            Letter::Tadpole { sign } => Letter::Tadpole { sign: sign.flip() },
            Letter::HalfRotation { sign } => Letter::HalfRotation { sign: sign.flip() },
        }
    }

    pub fn is_inverse_of(&self, other: &Letter) -> bool {
        self.inverse() == *other
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Letter::Spatial { generator, sign, level } => {
                write!(f, "x{}", generator as usize + 1)?;
                if level > 0 {
                    write!(f, "@{level}")?;
                }
                if sign == Sign::Neg {
                    f.write_str("'")?;
                }
                Ok(())
            }
            Letter::Tadpole { sign } => {
                f.write_str(if sign == Sign::Pos { "S" } else { "S'" })
            }
            Letter::HalfRotation { sign } => {
                f.write_str(if sign == Sign::Pos { "t" } else { "t'" })
            }
        }
    }
}

impl std::str::FromStr for Letter {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad letter token {token:?}"));
        let (body, sign) = match token.strip_suffix('\'') {
            Some(b) => (b, Sign::Neg),
            None => (token, Sign::Pos),
        };
        match body {
            "S" => return Ok(Letter::Tadpole { sign }),
            "t" => return Ok(Letter::HalfRotation { sign }),
            _ => {}
        }
        let rest = body.strip_prefix('x').ok_or_else(bad)?;
        let (num, level) = match rest.split_once('@') {
            Some((n, l)) => (n, l.parse::<u8>().map_err(|_| bad())?),
            None => (rest, 0),
        };
        let idx: u16 = num.parse().map_err(|_| bad())?;
        if idx == 0 || idx > 256 {
            return Err(bad());
        }
        Ok(Letter::Spatial { generator: (idx - 1) as u8, sign, level })
    }
}

/// A finite word over the alphabet; `cyclic` marks a closed contour.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    pub letters: Vec<Letter>,
    pub cyclic: bool,
}

impl Word {
    pub fn open(letters: Vec<Letter>) -> Self {
        Word { letters, cyclic: false }
    }

    pub fn closed(letters: Vec<Letter>) -> Self {
        Word { letters, cyclic: true }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace().peekable();
        let cyclic = tokens.peek() == Some(&"cyc:");
        if cyclic {
            tokens.next();
        }
        let letters: Result<Vec<Letter>> = tokens.map(str::parse).collect();
        Ok(Word { letters: letters?, cyclic })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.cyclic {
            f.write_str("cyc:")?;
            first = false;
        }
        for l in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        Ok(())
    }
}

/// Free reduction; cyclic words are additionally reduced across the
/// wrap-around seam until cyclically reduced.
pub fn reduce(w: &Word) -> Word {
    let mut stack: Vec<Letter> = Vec::with_capacity(w.letters.len());
    for &l in &w.letters {
        if stack.last().is_some_and(|top| top.is_inverse_of(&l)) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    if w.cyclic {
        // The stack is freely reduced, so seam cancellation cannot create
        // new interior pairs; peel matching ends until none match.
        let mut lo = 0usize;
        let mut hi = stack.len();
        while hi - lo >= 2 && stack[lo].is_inverse_of(&stack[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        stack = stack[lo..hi].to_vec();
    }
    Word { letters: stack, cyclic: w.cyclic }
}

/// Net rotation in half-rotation units: 2(#S⁺ − #S⁻) + (#t⁺ − #t⁻).
pub fn rotation_charge(w: &Word) -> i64 {
    w.letters
        .iter()
        .map(|l| match *l {
            Letter::Tadpole { sign } => 2 * sign.as_i8() as i64,
            Letter::HalfRotation { sign } => sign.as_i8() as i64,
            Letter::Spatial { .. } => 0,
        })
        .sum()
}

/// Vector sum of the word: each spatial letter contributes sign·root/2^level,
/// rotations contribute the null vector.
pub fn displacement(w: &Word, system: &RootSystem) -> Result<[f64; 3]> {
    let mut out = [0.0f64; 3];
    for l in &w.letters {
        if let Letter::Spatial { generator, sign, level } = *l {
            let root = system.generator(generator as usize)?;
            let scale = sign.as_i8() as f64 / f64::powi(2.0, level as i32);
            for (o, r) in out.iter_mut().zip(root) {
                *o += scale * r as f64;
            }
        }
    }
    Ok(out)
}

/// True when the two closed contours are equal as cyclic words, i.e. some
/// rotation of one reduction matches the other letter for letter.
pub fn cyclic_equal(a: &Word, b: &Word) -> Result<bool> {
    if !a.cyclic || !b.cyclic {
        return Err(Error::CyclicMismatch);
    }
    let ra = reduce(a).letters;
    let rb = reduce(b).letters;
    if ra.len() != rb.len() {
        return Ok(false);
    }
    if ra.is_empty() {
        return Ok(true);
    }
    let doubled: Vec<Letter> = ra.iter().chain(ra.iter()).copied().collect();
    Ok(doubled.windows(rb.len()).any(|w| w == rb.as_slice()))
}
