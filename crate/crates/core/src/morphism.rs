//! Nonerasing morphisms over integer alphabets.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{IncidenceMatrix, Mat2};
use crate::word::{Alphabet, Letter, Word};

/// A letter-to-word map extended to words by concatenation.
///
/// Images are always nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    domain: Alphabet,
    codomain: Alphabet,
    images: Vec<Word>,
}

/// `|f(x)| = a + b x` and `Σf(x) = c + d x` for every domain letter `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineProfile {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl AffineProfile {
    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.a, self.b, self.c, self.d)
    }
}

impl Morphism {
    /// Builds a morphism from `(letter, image)` rules.
    pub fn new<I: IntoIterator<Item = (Letter, Word)>>(rules: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (c, img) in rules {
            if img.is_empty() {
                return Err(Error::InvalidMorphism(format!("image of {c} is empty (erasing)")));
            }
            if map.insert(c, img).is_some() {
                return Err(Error::InvalidMorphism(format!("duplicate rule for letter {c}")));
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidMorphism("no rules".into()));
        }
        let domain = Alphabet::new(map.keys().copied().collect())?;
        let codomain = Alphabet::from_letters(map.values().flat_map(|w| w.iter().copied()))?;
        let images = map.into_values().collect();
        Ok(Morphism { domain, codomain, images })
    }

    pub fn domain(&self) -> &Alphabet {
        &self.domain
    }

    /// Letters occurring in some image.
    pub fn codomain(&self) -> &Alphabet {
        &self.codomain
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, c: Letter) -> Result<&Word> {
        self.domain
            .index_of(c)
            .map(|i| &self.images[i])
            .ok_or(Error::LetterOutsideDomain(c))
    }

    /// Image lookup by position in domain order.
    pub fn image_at(&self, i: usize) -> &Word {
        &self.images[i]
    }

    /// True when every image letter is itself in the domain.
    pub fn is_endomorphism(&self) -> bool {
        self.codomain.letters().iter().all(|&c| self.domain.contains(c))
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn min_image_len(&self) -> usize {
        self.images.iter().map(|w| w.len()).min().unwrap_or(0)
    }

    pub fn apply(&self, w: &[Letter]) -> Result<Word> {
        let mut out = Vec::with_capacity(w.len() * self.max_image_len());
        for &c in w {
            out.extend_from_slice(self.image(c)?);
        }
        Ok(Word::new(out))
    }

    pub fn power_apply(&self, n: usize, w: &[Letter]) -> Result<Word> {
        if n > 0 && !self.is_endomorphism() {
            return Err(Error::AlphabetMismatch(
                "iteration needs images over the domain alphabet".into(),
            ));
        }
        let mut cur = Word::from(w);
        for _ in 0..n {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    /// `f(a) = a x` with `f^n(x)` nonempty for all `n`.
    ///
    /// Images are never empty, so `f^n(x)` is nonempty as soon as `x` is;
    /// the test reduces to `f(a)` starting with `a` and `|f(a)| >= 2`.
    pub fn is_prolongable(&self, a: Letter) -> Result<bool> {
        let img = self.image(a)?;
        Ok(img.len() >= 2 && img[0] == a)
    }

    pub fn is_strictly_growing(&self) -> bool {
        self.images.iter().all(|w| w.len() >= 2)
    }

    pub fn affine_profile(&self) -> Option<AffineProfile> {
        let xs = self.domain.letters();
        let lens: Vec<i64> = self.images.iter().map(|w| w.len() as i64).collect();
        let sums: Vec<i64> = self.images.iter().map(|w| w.iter().sum()).collect();
        let (a, b) = fit_affine(xs, &lens)?;
        let (c, d) = fit_affine(xs, &sums)?;
        Some(AffineProfile { a, b, c, d })
    }

    /// Entry `(i, j)` counts letter `i` in the image of letter `j`, both in
    /// domain order.
    pub fn incidence_matrix(&self) -> Result<IncidenceMatrix> {
        if !self.is_endomorphism() {
            return Err(Error::AlphabetMismatch(
                "incidence matrix needs images over the domain alphabet".into(),
            ));
        }
        let n = self.domain.len();
        let mut entries = vec![vec![0i64; n]; n];
        for (j, img) in self.images.iter().enumerate() {
            for &c in img.iter() {
                let i = self.domain.index_of(c).expect("endomorphism");
                entries[i][j] += 1;
            }
        }
        Ok(IncidenceMatrix { entries })
    }

    /// `self ∘ g`, i.e. `x -> self(g(x))`.
    pub fn compose(&self, g: &Morphism) -> Result<Morphism> {
        if let Some(&c) = g.codomain.letters().iter().find(|&&c| !self.domain.contains(c)) {
            return Err(Error::AlphabetMismatch(format!(
                "letter {c} of the inner morphism's images is outside the outer domain"
            )));
        }
        let rules = g
            .domain
            .letters()
            .iter()
            .zip(&g.images)
            .map(|(&x, img)| Ok((x, self.apply(img)?)))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(rules)
    }

    pub fn identity(alphabet: &Alphabet) -> Morphism {
        Morphism::new(alphabet.letters().iter().map(|&c| (c, Word::new(vec![c])))).expect("nonempty alphabet")
    }
}

/// Integer `(p, q)` with `ys[i] = p + q xs[i]` for all `i`.
fn fit_affine(xs: &[Letter], ys: &[i64]) -> Option<(i64, i64)> {
    let (p, q) = if xs.len() == 1 {
        // a unary alphabet does not determine the slope; use zero
        (ys[0], 0)
    } else {
        let dx = xs[1] - xs[0];
        let dy = ys[1] - ys[0];
        if dy % dx != 0 {
            return None;
        }
        let q = dy / dx;
        (ys[0] - q * xs[0], q)
    };
    xs.iter().zip(ys).all(|(&x, &y)| p + q * x == y).then_some((p, q))
}

impl FromStr for Morphism {
    type Err = Error;

    /// Parses whitespace-separated `letter->image` rules, e.g.
    /// `0->00001 1->01101` or `10->[10,3] 3->[3,10]`.
    fn from_str(s: &str) -> Result<Self> {
        let rules = s
            .split_whitespace()
            .map(|rule| {
                let (lhs, rhs) = rule
                    .split_once("->")
                    .ok_or_else(|| Error::Parse(format!("rule {rule:?} lacks '->'")))?;
                let c: Letter = lhs
                    .trim_start_matches('[')
                    .trim_end_matches(']')
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad letter {lhs:?} in rule {rule:?}")))?;
                let img: Word = rhs.parse()?;
                Ok((c, img))
            })
            .collect::<Result<Vec<_>>>()?;
        if rules.is_empty() {
            return Err(Error::Parse("empty morphism".into()));
        }
        Morphism::new(rules)
    }
}

impl fmt::Display for Morphism {
    /// Canonical rule text in domain order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.domain.is_compact() && self.codomain.is_compact();
        for (i, (&c, img)) in self.domain.letters().iter().zip(&self.images).enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if compact {
                write!(f, "{c}->{img}")?;
            } else {
                let parts: Vec<String> = img.iter().map(|x| x.to_string()).collect();
                write!(f, "{c}->[{}]", parts.join(","))?;
            }
        }
        Ok(())
    }
}

impl Serialize for Morphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Morphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The morphisms studied by this toolkit.
pub mod known {
    use super::Morphism;

    pub const BETA: &str = "0->00001 1->01101";
    pub const GAMMA: &str = "0->2 1->101 2->10001";

    /// 0 -> 00001, 1 -> 01101; fixed point on 0.
    pub fn beta() -> Morphism {
        BETA.parse().expect("valid rules")
    }

    /// 0 -> 2, 1 -> 101, 2 -> 10001; fixed point on 1.
    pub fn gamma() -> Morphism {
        GAMMA.parse().expect("valid rules")
    }

    /// The square of gamma.
    pub fn delta() -> Morphism {
        let g = gamma();
        g.compose(&g).expect("gamma is an endomorphism")
    }
}

#[cfg(test)]
mod tests {
    use super::known::*;
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(beta().apply(&w("01")).unwrap(), w("0000101101"));
        assert_eq!(gamma().apply(&w("101")).unwrap(), w("1012101"));
        assert_eq!(beta().apply(&[]).unwrap(), Word::empty());
        assert_eq!(beta().apply(&[2]), Err(Error::LetterOutsideDomain(2)));
    }

    #[test]
    fn power_apply_examples() {
        assert_eq!(gamma().power_apply(2, &[1]).unwrap(), w("1012101"));
        assert_eq!(
            beta().power_apply(2, &[0]).unwrap(),
            w("0000100001000010000101101")
        );
        assert_eq!(beta().power_apply(0, &w("0110")).unwrap(), w("0110"));
    }

    #[test]
    fn prolongability_and_growth() {
        assert!(beta().is_prolongable(0).unwrap());
        assert!(delta().is_prolongable(1).unwrap());
        assert!(!gamma().is_prolongable(0).unwrap());
        assert!(gamma().is_prolongable(1).unwrap());
        assert!(beta().is_prolongable(5).is_err());
        assert!(beta().is_strictly_growing());
        assert!(!gamma().is_strictly_growing());
        assert!(delta().is_strictly_growing());
    }

    #[test]
    fn affine_profiles() {
        assert_eq!(beta().affine_profile().unwrap().matrix(), Mat2::new(5, 0, 1, 2));
        assert_eq!(delta().affine_profile().unwrap().matrix(), Mat2::new(5, 2, 2, 4));
        assert_eq!(
            gamma().affine_profile().unwrap(),
            AffineProfile { a: 1, b: 2, c: 2, d: 0 }
        );
        // lengths 1, 2, 4 are not affine in the letter
        let f: Morphism = "0->0 1->01 2->0122".parse().unwrap();
        assert_eq!(f.affine_profile(), None);
        // slope 1/2 is not integral
        let g: Morphism = "0->00 2->000".parse().unwrap();
        assert_eq!(g.affine_profile(), None);
    }

    #[test]
    fn incidence_matrices() {
        let m = gamma().incidence_matrix().unwrap();
        assert_eq!(m.entries, vec![vec![0, 1, 3], vec![0, 2, 2], vec![1, 0, 0]]);
        for j in 0..3 {
            assert_eq!(m.column_sum(j), gamma().image_at(j).len() as i64);
        }
        assert_eq!(m.characteristic_at(1), 0);
        let id = Morphism::identity(&"0,1".parse().unwrap());
        assert_eq!(id.incidence_matrix().unwrap().entries, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn composition() {
        let d = delta();
        assert_eq!(d.images(), &[w("10001"), w("1012101"), w("101222101")]);
        let mg = gamma().affine_profile().unwrap().matrix();
        assert_eq!(mg * mg, Mat2::new(5, 2, 2, 4));
        assert_eq!(mg * mg, d.affine_profile().unwrap().matrix());
        let id = Morphism::identity(beta().domain());
        assert_eq!(beta().compose(&id).unwrap(), beta());
        assert!(matches!(beta().compose(&gamma()), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn parsing() {
        assert!("0->".parse::<Morphism>().is_err());
        assert!("0->01 0->10".parse::<Morphism>().is_err());
        assert!("0 1".parse::<Morphism>().is_err());
        assert!("".parse::<Morphism>().is_err());
        let f: Morphism = "10->[10,3] 3->[3,10,3]".parse().unwrap();
        assert_eq!(f.image(10).unwrap().letters(), &[10, 3]);
        assert_eq!(f.to_string(), "3->[3,10,3] 10->[10,3]");
        assert_eq!(f.to_string().parse::<Morphism>().unwrap(), f);
        // rule order is irrelevant to the canonical form
        let g: Morphism = "2->10001 0->2 1->101".parse().unwrap();
        assert_eq!(g.to_string(), GAMMA);
    }
}
