//! Reduced words in a free group and their depth-first enumeration.

use rand::Rng;

use crate::hyperbolic::Mobius;

/// A finite alphabet of generators closed under inversion.
pub trait LetterSet: Sync {
    fn letter_count(&self) -> usize;
    fn letter(&self, k: usize) -> &Mobius;
    fn inverse_letter(&self, k: usize) -> usize;

    /// Depth-first walk over reduced words of length 1..=max_len. The visitor
    /// returns `false` to skip the subtree below the current word.
    fn visit_words<F: FnMut(&WordNode<'_>) -> bool>(&self, max_len: usize, mut visit: F)
    where
        Self: Sized,
    {
        let mut letters = Vec::with_capacity(max_len);
        for k in 0..self.letter_count() {
            descend(self, &Mobius::IDENTITY, k, max_len, &mut letters, &mut visit);
        }
    }

    /// Walk restricted to the subtree of words starting with `prefix`.
    fn visit_subtree<F: FnMut(&WordNode<'_>) -> bool>(&self, prefix: &[u8], max_len: usize, mut visit: F)
    where
        Self: Sized,
    {
        if prefix.is_empty() || prefix.len() > max_len {
            return;
        }
        let (last, head) = prefix.split_last().unwrap();
        let head_el = head.iter().fold(Mobius::IDENTITY, |acc, &k| acc.mul_raw(self.letter(k as usize)));
        let mut letters = head.to_vec();
        descend(self, &head_el, *last as usize, max_len, &mut letters, &mut visit);
    }

    /// A uniformly random reduced word of the given length.
    fn random_word<R: Rng>(&self, rng: &mut R, len: usize) -> Vec<u8>
    where
        Self: Sized,
    {
        let n = self.letter_count();
        let mut w: Vec<u8> = Vec::with_capacity(len);
        for i in 0..len {
            let k = if i == 0 {
                rng.random_range(0..n)
            } else {
                let banned = self.inverse_letter(w[i - 1] as usize);
                let k = rng.random_range(0..n - 1);
                if k >= banned { k + 1 } else { k }
            };
            w.push(k as u8);
        }
        w
    }
}

/// A word reached during enumeration.
#[derive(Debug)]
pub struct WordNode<'a> {
    pub letters: &'a [u8],
    /// Element of the word without its last letter.
    pub prefix: Mobius,
    /// Element of the whole word.
    pub element: Mobius,
}

impl WordNode<'_> {
    pub fn len(&self) -> usize {
        self.letters.len()
    }
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
    pub fn last(&self) -> usize {
        *self.letters.last().expect("nonempty") as usize
    }
}

fn descend<L: LetterSet, F: FnMut(&WordNode<'_>) -> bool>(
    set: &L,
    prefix: &Mobius,
    k: usize,
    max_len: usize,
    letters: &mut Vec<u8>,
    visit: &mut F,
) {
    letters.push(k as u8);
    let element = prefix.mul_raw(set.letter(k));
    let go_on = visit(&WordNode { letters, prefix: *prefix, element });
    if go_on && letters.len() < max_len {
        let inv = set.inverse_letter(k);
        for next in 0..set.letter_count() {
            if next != inv {
                descend(set, &element, next, max_len, letters, visit);
            }
        }
    }
    letters.pop();
}

/// An owned reduced word with its element.
#[derive(Debug, Clone, PartialEq)]
pub struct Word {
    pub letters: Vec<u8>,
    pub element: Mobius,
}

impl Word {
    pub fn displacement(&self) -> f64 {
        self.element.displacement()
    }
}

/// Collects every reduced word of length ≤ max_len, the empty word first.
pub fn enumerate_words<L: LetterSet>(set: &L, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word { letters: Vec::new(), element: Mobius::IDENTITY }];
    set.visit_words(max_len, |node| {
        out.push(Word { letters: node.letters.to_vec(), element: node.element.canonical() });
        true
    });
    out
}

/// Number of reduced words of length ≤ max_len in a free group on n/2 generators.
pub fn count_reduced_words(n_letters: usize, max_len: usize) -> u128 {
    let mut total: u128 = 1;
    let mut level: u128 = n_letters as u128;
    for _ in 0..max_len {
        total += level;
        level *= (n_letters - 1) as u128;
    }
    total
}

/// The cyclic group ⟨a_ℓ⟩, used as a test harness for the word machinery.
#[derive(Debug, Clone)]
pub struct CyclicGroup {
    letters: [Mobius; 2],
}

impl CyclicGroup {
    pub fn new(translation: f64) -> Self {
        CyclicGroup { letters: [Mobius::a(translation), Mobius::a(-translation)] }
    }
}

impl LetterSet for CyclicGroup {
    fn letter_count(&self) -> usize {
        2
    }
    fn letter(&self, k: usize) -> &Mobius {
        &self.letters[k]
    }
    fn inverse_letter(&self, k: usize) -> usize {
        k ^ 1
    }
}

