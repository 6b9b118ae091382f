//! Complete prefix codes of words ("stopping-time" codes).
//!
//! For any complete prefix code C over the maps, the attractor satisfies
//! `A = ∪_{σ∈C} f_σ(A)`. Expanding words until `‖L_σ‖₂ ≤ κ` turns a weakly
//! contracting IFS into a strongly contracting one with the same attractor,
//! which is what keeps grid covers tight near t₀.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::family::AffineMap;
use crate::linalg::spectral_norm;

/// Words never grow beyond this length.
pub const MAX_WORD_LEN: usize = 4096;

#[derive(Clone, Debug)]
pub struct WordCode {
    /// Words in lexicographic order; `words[k][0]` is the outermost map.
    pub words: Vec<Vec<usize>>,
    /// `maps[k] = f_{w₀} ∘ f_{w₁} ∘ ⋯`.
    pub maps: Vec<AffineMap>,
    /// Largest ‖L_σ‖₂ over the code (the effective contraction).
    pub max_norm: f64,
}

struct Leaf {
    norm: f64,
    word: Vec<usize>,
    map: AffineMap,
}

impl PartialEq for Leaf {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Leaf {}
impl PartialOrd for Leaf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Leaf {
    // Largest norm first; among equals, the lexicographically smallest word.
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm.total_cmp(&other.norm).then_with(|| other.word.cmp(&self.word))
    }
}

impl WordCode {
    /// The one-letter code.
    pub fn trivial(maps: &[AffineMap]) -> Self {
        Self::build(maps, f64::INFINITY, maps.len())
    }

    /// Greedily expands the leaf with the largest norm until every leaf has
    /// norm ≤ `target` or the next expansion would exceed `max_words`.
    pub fn build(maps: &[AffineMap], target: f64, max_words: usize) -> Self {
        let n = maps.len();
        assert!(n > 0, "empty instance");
        let mut heap: BinaryHeap<Leaf> = maps
            .iter()
            .enumerate()
            .map(|(i, m)| Leaf { norm: spectral_norm(&m.l), word: vec![i], map: *m })
            .collect();
        while let Some(top) = heap.peek() {
            if top.norm <= target || heap.len() + n - 1 > max_words || top.word.len() >= MAX_WORD_LEN {
                break;
            }
            let top = heap.pop().unwrap();
            for (i, m) in maps.iter().enumerate() {
                let map = top.map.compose(m);
                let mut word = top.word.clone();
                word.push(i);
                heap.push(Leaf { norm: spectral_norm(&map.l), word, map });
            }
        }
        let mut leaves = heap.into_vec();
        leaves.sort_by(|a, b| a.word.cmp(&b.word));
        let max_norm = leaves.iter().map(|l| l.norm).fold(0.0, f64::max);
        WordCode {
            words: leaves.iter().map(|l| l.word.clone()).collect(),
            maps: leaves.iter().map(|l| l.map).collect(),
            max_norm,
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}
