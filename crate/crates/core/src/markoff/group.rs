//! Generators of G_A and words in them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{MarkoffContext, MarkoffTriple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    X,
    Y,
    Z,
}

impl Coord {
    pub fn index(self) -> usize {
        self as usize
    }

    /// 1-based position, as printed.
    pub fn position(self) -> usize {
        self.index() + 1
    }

    pub fn from_position(pos: usize) -> Option<Coord> {
        match pos {
            1 => Some(Coord::X),
            2 => Some(Coord::Y),
            3 => Some(Coord::Z),
            _ => None,
        }
    }
}

/// A generator of G_A. Every generator is an involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Swap(Coord, Coord),
    DoubleNeg(Coord, Coord),
    /// `(x, y, z) -> (x, y, Axy - z)`
    Rho,
}

impl Generator {
    pub fn apply(self, ctx: &MarkoffContext, p: &MarkoffTriple) -> MarkoffTriple {
        let mut coords = p.coords().clone();
        match self {
            Generator::Swap(a, b) => coords.swap(a.index(), b.index()),
            Generator::DoubleNeg(a, b) => {
                coords[a.index()] = coords[a.index()].negate();
                coords[b.index()] = coords[b.index()].negate();
            }
            Generator::Rho => {
                let [x, y, z] = &coords;
                coords[2] = &(&(ctx.a() * x) * y) - z;
            }
        }
        let [x, y, z] = coords;
        MarkoffTriple::new(x, y, z)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Swap(a, b) => write!(f, "swap({},{})", a.position(), b.position()),
            Generator::DoubleNeg(a, b) => write!(f, "neg({},{})", a.position(), b.position()),
            Generator::Rho => write!(f, "rho"),
        }
    }
}

impl FromStr for Generator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "rho" {
            return Ok(Generator::Rho);
        }
        let bad = || format!("unknown generator `{s}`");
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let (a, b) = args.split_once(',').ok_or_else(bad)?;
        let coord = |t: &str| {
            t.trim()
                .parse::<usize>()
                .ok()
                .and_then(Coord::from_position)
                .ok_or_else(bad)
        };
        let (a, b) = (coord(a)?, coord(b)?);
        match name.trim() {
            "swap" => Ok(Generator::Swap(a, b)),
            "neg" => Ok(Generator::DoubleNeg(a, b)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Generators in application order.
///
/// `apply` runs them first to last. Since every generator is an involution,
/// `replay` (last to first) undoes `apply`: if `word.apply(P) = R` then
/// `word.replay(R) = P`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupWord(pub Vec<Generator>);

impl GroupWord {
    pub fn new() -> Self {
        GroupWord(Vec::new())
    }

    pub fn push(&mut self, g: Generator) {
        self.0.push(g);
    }

    pub fn extend(&mut self, other: GroupWord) {
        self.0.extend(other.0);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0
    }

    pub fn apply(&self, ctx: &MarkoffContext, p: &MarkoffTriple) -> MarkoffTriple {
        self.0.iter().fold(p.clone(), |acc, g| g.apply(ctx, &acc))
    }

    pub fn replay(&self, ctx: &MarkoffContext, p: &MarkoffTriple) -> MarkoffTriple {
        self.0
            .iter()
            .rev()
            .fold(p.clone(), |acc, g| g.apply(ctx, &acc))
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Generator::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markoff::is_solution;
    use crate::markoff::tests::{ctx, triple};

    const ALL: [Coord; 3] = [Coord::X, Coord::Y, Coord::Z];

    fn generators() -> Vec<Generator> {
        let mut out = vec![Generator::Rho];
        for &a in &ALL {
            for &b in &ALL {
                if a < b {
                    out.push(Generator::Swap(a, b));
                    out.push(Generator::DoubleNeg(a, b));
                }
            }
        }
        out
    }

    #[test]
    fn double_neg_example() {
        let c = ctx(5, "t");
        let p = triple(&c, "0", "2*t", "t");
        let q = Generator::DoubleNeg(Coord::Y, Coord::Z).apply(&c, &p);
        assert_eq!(q, triple(&c, "0", "3*t", "4*t"));
        let q = Generator::DoubleNeg(Coord::X, Coord::Y).apply(&c, &p);
        assert_eq!(q, triple(&c, "0", "3*t", "t"));
        assert!(is_solution(&c, &q).unwrap());
    }

    #[test]
    fn rho_on_quadratic_root() {
        let c = ctx(13, "1");
        let p = triple(&c, "t", "t+2*i", "t^2+2*i*t-2");
        assert_eq!(Generator::Rho.apply(&c, &p), triple(&c, "t", "t+2*i", "2"));
    }

    #[test]
    fn generators_are_involutions_preserving_solutions() {
        for (p, a, x, y, z) in [
            (13, "1", "t", "t+2*i", "t^2+2*i*t-2"),
            (5, "t", "0", "2*t", "t"),
            (13, "t^2+1", "t", "5*t", "5*t^4+5*t^2"),
        ] {
            let c = ctx(p, a);
            let sol = triple(&c, x, y, z);
            assert!(is_solution(&c, &sol).unwrap());
            for g in generators() {
                let img = g.apply(&c, &sol);
                assert!(is_solution(&c, &img).unwrap(), "{g}");
                assert_eq!(g.apply(&c, &img), sol, "{g}");
            }
        }
    }

    #[test]
    fn word_replay_inverts_apply() {
        let c = ctx(13, "1");
        let p = triple(&c, "t", "t+2*i", "t^2+2*i*t-2");
        let word = GroupWord(vec![
            Generator::Rho,
            Generator::Swap(Coord::X, Coord::Z),
            Generator::DoubleNeg(Coord::Y, Coord::Z),
            Generator::Rho,
        ]);
        let r = word.apply(&c, &p);
        assert_eq!(word.replay(&c, &r), p);
    }

    #[test]
    fn generator_text_roundtrip() {
        for g in generators() {
            assert_eq!(g.to_string().parse::<Generator>().unwrap(), g);
        }
        assert!("swap(1,4)".parse::<Generator>().is_err());
        assert!("flip(1,2)".parse::<Generator>().is_err());
        let w = GroupWord(vec![Generator::Swap(Coord::X, Coord::Y), Generator::Rho]);
        assert_eq!(serde_json::to_string(&w).unwrap(), r#"["swap(1,2)","rho"]"#);
    }
}
