use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::word::{Letter, Word};

/// Growable prefix of the fixed point `h^ω(a)` of a prolongable morphism.
///
/// With `h(a) = a x` the fixed point is `a x h(x) h²(x) ⋯`, equivalently
/// `h` applied to itself letter by letter: after the images of the first
/// `j` letters have been appended the buffer equals `h(w[..j])`, which is
/// a prefix of `w`. Each growth step appends one more image.
#[derive(Debug, Clone)]
pub struct FixedPointStream {
    morphism: Morphism,
    seed: Letter,
    // images in domain-index form, to avoid a lookup per letter
    images: Vec<Vec<usize>>,
    indices: Vec<usize>,
    buffer: Vec<Letter>,
    expanded: usize,
}

impl FixedPointStream {
    pub fn new(morphism: Morphism, seed: Letter) -> Result<Self> {
        if !morphism.is_prolongable(seed)? {
            return Err(Error::NotProlongable(seed));
        }
        if !morphism.is_endomorphism() {
            return Err(Error::AlphabetMismatch(
                "fixed points need images over the domain alphabet".into(),
            ));
        }
        let dom = morphism.domain().clone();
        let images: Vec<Vec<usize>> = morphism
            .images()
            .iter()
            .map(|w| w.iter().map(|&c| dom.index_of(c).expect("endomorphism")).collect())
            .collect();
        let seed_idx = dom.index_of(seed).expect("checked");
        let indices = images[seed_idx].clone();
        let buffer = indices.iter().map(|&i| dom.letters()[i]).collect();
        Ok(FixedPointStream { morphism, seed, images, indices, buffer, expanded: 1 })
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn seed(&self) -> Letter {
        self.seed
    }

    fn grow_to(&mut self, n: usize) {
        let letters = self.morphism.domain().letters();
        while self.buffer.len() < n {
            let c = self.indices[self.expanded];
            self.expanded += 1;
            for &i in &self.images[c] {
                self.indices.push(i);
                self.buffer.push(letters[i]);
            }
        }
    }

    /// The length-`n` prefix of the fixed point.
    pub fn prefix(&mut self, n: usize) -> Word {
        self.grow_to(n);
        Word::from(&self.buffer[..n])
    }

    /// Borrowed view of the length-`n` prefix.
    pub fn prefix_slice(&mut self, n: usize) -> &[Letter] {
        self.grow_to(n);
        &self.buffer[..n]
    }

    /// Prefix as positions in domain order.
    pub fn prefix_indices(&mut self, n: usize) -> &[usize] {
        self.grow_to(n);
        &self.indices[..n]
    }

    pub fn buffered_len(&self) -> usize {
        self.buffer.len()
    }
}

/// Convenience: the length-`n` prefix of `f^ω(seed)`.
pub fn fixed_point_prefix(f: &Morphism, seed: Letter, n: usize) -> Result<Word> {
    Ok(FixedPointStream::new(f.clone(), seed)?.prefix(n))
}
