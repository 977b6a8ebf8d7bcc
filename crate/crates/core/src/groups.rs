//! Word calculus in free groups.
//!
//! Words are kept freely reduced at all times. The string form uses `a`, `b`,
//! `c`, ... for generators and the uppercase letter for the inverse, so
//! `"abA"` is a·b·a⁻¹ and the empty string is the identity.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default cap on ball sizes produced by [`enumerate_ball`].
pub const DEFAULT_BALL_BUDGET: u128 = 4_000_000;

/// Longest word length accepted by [`stable_lipschitz_constant`].
pub const LIPSCHITZ_MAX_LEN_CAP: usize = 6;

/// A generator or its inverse. Ordered as `a < A < b < B < ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    generator: u16,
    inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter {
            generator: generator as u16,
            inverse,
        }
    }

    pub fn positive(generator: usize) -> Self {
        Self::new(generator, false)
    }

    pub fn negative(generator: usize) -> Self {
        Self::new(generator, true)
    }

    /// Zero-based generator index.
    pub fn generator(self) -> usize {
        self.generator as usize
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn inverse(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// `+1` for a generator, `-1` for an inverse.
    pub fn sign(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        if c.is_ascii_lowercase() {
            Ok(Letter::positive((c as u8 - b'a') as usize))
        } else if c.is_ascii_uppercase() {
            Ok(Letter::negative((c as u8 - b'A') as usize))
        } else {
            Err(Error::Parse(format!("invalid letter {c:?}")))
        }
    }

    pub fn to_char(self) -> char {
        assert!(self.generator < 26, "string form supports at most 26 generators");
        let base = if self.inverse { b'A' } else { b'a' };
        (base + self.generator as u8) as char
    }

    /// All `2n` letters over `n` generators, in letter order.
    pub fn alphabet(n_generators: usize) -> Vec<Letter> {
        (0..n_generators)
            .flat_map(|g| [Letter::positive(g), Letter::negative(g)])
            .collect()
    }
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Parses the letter string form, reducing it.
    pub fn parse(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(Letter::from_char)
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::reduce(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of generators needed to spell this word.
    pub fn rank_hint(&self) -> usize {
        self.0.iter().map(|l| l.generator() + 1).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Reduced product `self · other`.
    pub fn mul(&self, other: &Word) -> Self {
        let mut left = self.0.len();
        let mut k = 0;
        while left > 0 && k < other.0.len() && self.0[left - 1] == other.0[k].inverse() {
            left -= 1;
            k += 1;
        }
        let mut out = Vec::with_capacity(left + other.0.len() - k);
        out.extend_from_slice(&self.0[..left]);
        out.extend_from_slice(&other.0[k..]);
        Word(out)
    }

    /// Appends a letter and reduces.
    pub fn push(&self, l: Letter) -> Self {
        self.mul(&Word::letter(l))
    }

    /// Brute-force power by repeated multiplication.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Word::identity();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn conjugate_by(&self, c: &Word) -> Self {
        c.mul(self).mul(&c.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(f), Some(l)) if self.0.len() >= 2 => *f != l.inverse(),
            _ => true,
        }
    }

    /// Splits `self = conjugator · core · conjugator⁻¹` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.0.len();
        let mut k = 0;
        while n >= 2 * k + 2 && self.0[k] == self.0[n - 1 - k].inverse() {
            k += 1;
        }
        (
            Word(self.0[k..n - k].to_vec()),
            Word(self.0[..k].to_vec()),
        )
    }

    /// Stable norm `lim ‖wⁿ‖/n`, which for free groups is the length of the
    /// cyclic core.
    pub fn stable_norm(&self) -> usize {
        self.cyclic_reduce().0.len()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Free reduction of a raw letter sequence.
pub fn reduce(raw: &[Letter]) -> Word {
    Word::reduce(raw.iter().copied())
}

pub fn cyclic_reduce(w: &Word) -> (Word, Word) {
    w.cyclic_reduce()
}

pub fn stable_norm(w: &Word) -> usize {
    w.stable_norm()
}

/// An endomorphism of `F_n`, given by the image of each positive generator.
///
/// Nothing checks invertibility. Lipschitz constants are only meaningful
/// when the images do define an automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Automorphism {
    images: Vec<Word>,
}

impl Automorphism {
    pub fn new(images: Vec<Word>) -> Self {
        Automorphism { images }
    }

    pub fn parse(images: &[&str]) -> Result<Self> {
        Ok(Automorphism::new(
            images.iter().map(|s| Word::parse(s)).collect::<Result<_>>()?,
        ))
    }

    pub fn identity(n_generators: usize) -> Self {
        Automorphism::new(
            (0..n_generators)
                .map(|g| Word::letter(Letter::positive(g)))
                .collect(),
        )
    }

    /// Conjugation `x ↦ c x c⁻¹`.
    pub fn inner(n_generators: usize, c: &Word) -> Self {
        Automorphism::new(
            (0..n_generators)
                .map(|g| Word::letter(Letter::positive(g)).conjugate_by(c))
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    fn image_of(&self, l: Letter) -> Word {
        match self.images.get(l.generator()) {
            Some(img) if l.is_inverse() => img.inverse(),
            Some(img) => img.clone(),
            // letters beyond the rank are fixed
            None => Word::letter(l),
        }
    }

    pub fn apply(&self, w: &Word) -> Word {
        Word::reduce(
            w.letters()
                .iter()
                .flat_map(|&l| self.image_of(l).0.into_iter()),
        )
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        let n = self.rank().max(other.rank());
        Automorphism::new(
            (0..n)
                .map(|g| self.apply(&other.image_of(Letter::positive(g))))
                .collect(),
        )
    }
}

pub fn apply_automorphism(phi: &Automorphism, w: &Word) -> Word {
    phi.apply(w)
}

/// Largest ratio `‖φ(w)‖_∞ / ‖w‖_∞` over nontrivial cyclically reduced
/// words with `‖w‖ ≤ max_len`, found by exhaustive enumeration.
pub fn stable_lipschitz_constant(phi: &Automorphism, max_len: usize) -> Result<Ratio<usize>> {
    Ok(worst_stable_ratio(phi, max_len)?.0)
}

fn worst_stable_ratio(phi: &Automorphism, max_len: usize) -> Result<(Ratio<usize>, Option<Word>)> {
    if max_len == 0 {
        return Err(Error::InvalidInput("max_len must be at least 1".into()));
    }
    if max_len > LIPSCHITZ_MAX_LEN_CAP {
        return Err(Error::LengthCap {
            max_len,
            cap: LIPSCHITZ_MAX_LEN_CAP,
        });
    }
    let ball = enumerate_ball(phi.rank(), max_len)?;
    let mut best = (Ratio::new(0, 1), None);
    for w in ball.elements.iter().filter(|w| !w.is_empty() && w.is_cyclically_reduced()) {
        let ratio = Ratio::new(phi.apply(w).stable_norm(), w.len());
        if ratio > best.0 {
            best = (ratio, Some(w.clone()));
        }
    }
    Ok(best)
}

/// Outcome of testing `‖φ(w)‖_∞ ≤ (L + 2)‖w‖_∞` at bounded length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StableBound {
    pub lipschitz: f64,
    pub max_len: usize,
    /// Measured constant as `numerator/denominator`.
    pub constant: String,
    pub worst: Option<Word>,
    pub holds: bool,
}

pub fn stable_bound_check(phi: &Automorphism, lipschitz: f64, max_len: usize) -> Result<StableBound> {
    let (ratio, worst) = worst_stable_ratio(phi, max_len)?;
    let value = *ratio.numer() as f64 / *ratio.denom() as f64;
    Ok(StableBound {
        lipschitz,
        max_len,
        constant: format!("{}/{}", ratio.numer(), ratio.denom()),
        worst,
        holds: value <= lipschitz + 2.0,
    })
}

/// Uniformly random reduced word of length exactly `len`.
pub fn random_word<R: Rng>(rng: &mut R, n_generators: usize, len: usize) -> Word {
    let alphabet = Letter::alphabet(n_generators);
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    while out.len() < len && !alphabet.is_empty() {
        let l = alphabet[rng.random_range(0..alphabet.len())];
        if out.last().is_some_and(|&p| p == l.inverse()) {
            continue;
        }
        out.push(l);
    }
    Word(out)
}

/// Reduced words of length at most `radius`, in shortlex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallEnumeration {
    pub n_generators: usize,
    pub radius: usize,
    pub elements: Vec<Word>,
}

/// Closed-form count of reduced words of length at most `radius` in `F_n`.
pub fn ball_size(n_generators: usize, radius: usize) -> u128 {
    if n_generators == 0 {
        return 1;
    }
    let branch = 2 * n_generators as u128 - 1;
    let mut total: u128 = 1;
    let mut sphere: u128 = 2 * n_generators as u128;
    for _ in 0..radius {
        total = total.saturating_add(sphere);
        sphere = sphere.saturating_mul(branch);
    }
    total
}

pub fn enumerate_ball(n_generators: usize, radius: usize) -> Result<BallEnumeration> {
    enumerate_ball_with_budget(n_generators, radius, DEFAULT_BALL_BUDGET)
}

pub fn enumerate_ball_with_budget(
    n_generators: usize,
    radius: usize,
    budget: u128,
) -> Result<BallEnumeration> {
    let elements = ball_fold(n_generators, radius, budget, (), |_, _| ())?
        .into_iter()
        .map(|(w, ())| w)
        .collect();
    Ok(BallEnumeration {
        n_generators,
        radius,
        elements,
    })
}

/// Enumerates the ball in shortlex order carrying a value along each word:
/// the value at `w·l` is `extend(value at w, l)`.
pub fn ball_fold<T, F>(
    n_generators: usize,
    radius: usize,
    budget: u128,
    root: T,
    extend: F,
) -> Result<Vec<(Word, T)>>
where
    F: Fn(&T, Letter) -> T,
{
    let size = ball_size(n_generators, radius);
    if size > budget {
        return Err(Error::BudgetExceeded {
            what: "word ball",
            requested: size,
            budget,
        });
    }
    let alphabet = Letter::alphabet(n_generators);
    let mut out: Vec<(Word, T)> = Vec::with_capacity(size as usize);
    out.push((Word::identity(), root));
    let (mut start, mut end) = (0, 1);
    for _ in 0..radius {
        let mut layer = Vec::new();
        for (w, value) in &out[start..end] {
            for &l in &alphabet {
                if w.0.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut letters = w.0.clone();
                letters.push(l);
                layer.push((Word(letters), extend(value, l)));
            }
        }
        out.extend(layer);
        start = end;
        end = out.len();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("aAb"), w("b"));
        assert_eq!(w(""), Word::identity());
        assert_eq!(w("abBa").to_string(), "aa");
        assert_eq!(w("abBAba").to_string(), "ba");
    }

    #[test]
    fn parse_rejects_bad_letters() {
        assert!(Word::parse("ab1").is_err());
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(w("abA").cyclic_reduce(), (w("b"), w("a")));
        assert_eq!(w("ab").cyclic_reduce(), (w("ab"), w("")));
        // abaBA: strip a..A, then b..B, leaving core "a" and conjugator "ab"
        let (core, conj) = w("abaBA").cyclic_reduce();
        assert_eq!(core, w("a"));
        assert_eq!(conj, w("ab"));
        assert_eq!(core.conjugate_by(&conj), w("abaBA"));
    }

    #[test]
    fn stable_norm_examples() {
        assert_eq!(w("abA").stable_norm(), 1);
        assert_eq!(Word::identity().stable_norm(), 0);
        let abab = w("abab");
        assert_eq!(abab.stable_norm(), 4);
        assert_eq!(abab.pow(16).len(), 64);
    }

    #[test]
    fn automorphism_examples() {
        let phi = Automorphism::parse(&["ab", "b"]).unwrap();
        assert_eq!(phi.apply(&w("aB")), w("a"));
        assert_eq!(phi.apply(&w("aa")).to_string(), "abab");
        let id = Automorphism::identity(2);
        assert_eq!(id.apply(&w("abAAb")), w("abAAb"));
        assert_eq!(phi.apply(&w("A")), w("BA"));
    }

    #[test]
    fn lipschitz_examples() {
        let id = Automorphism::identity(2);
        assert_eq!(stable_lipschitz_constant(&id, 5).unwrap(), Ratio::new(1, 1));
        let inner = Automorphism::inner(2, &w("a"));
        assert_eq!(stable_lipschitz_constant(&inner, 5).unwrap(), Ratio::new(1, 1));
        assert!(matches!(
            stable_lipschitz_constant(&id, 7),
            Err(Error::LengthCap { .. })
        ));
        assert!(stable_lipschitz_constant(&id, 0).is_err());
    }

    #[test]
    fn ball_examples() {
        assert_eq!(enumerate_ball(2, 0).unwrap().elements, vec![Word::identity()]);
        assert_eq!(enumerate_ball(2, 1).unwrap().elements.len(), 5);
        assert_eq!(enumerate_ball(2, 2).unwrap().elements.len(), 17);
        assert_eq!(enumerate_ball(1, 4).unwrap().elements.len(), 9);
        assert!(matches!(
            enumerate_ball_with_budget(3, 10, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn ball_is_shortlex_ordered() {
        let ball = enumerate_ball(2, 3).unwrap().elements;
        for pair in ball.windows(2) {
            assert!((pair[0].len(), &pair[0]) < (pair[1].len(), &pair[1]));
        }
    }

    #[test]
    fn serde_uses_letter_strings() {
        let json = serde_json::to_string(&w("abA")).unwrap();
        assert_eq!(json, "\"abA\"");
        let back: Word = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w("abA"));
    }
}
