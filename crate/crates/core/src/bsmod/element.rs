//! Elements of Bott-Samelson bimodules in left-basis normal form.
//!
//! `B_w = R ⊗_{R^{w_1}} R ⊗ ... ⊗_{R^{w_d}} R` is free as a left `R`-module on the elements
//! `1 ⊗ e_1 ⊗ ... ⊗ e_d` with `e_k ∈ {1, f_{w_k}}`. Such a basis element is a [`Label`]: bit
//! `k` is set when the slot right of strand `k` (counted from 0 on the left) holds the root.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::coxeter::Word;
use crate::poly_core::{invariant_split, Monomial, MultiPoly};

pub type Label = u32;

/// Grading degree of a basis label of a word of length `len`.
pub fn label_degree(label: Label, len: usize) -> i32 {
    2 * label.count_ones() as i32 - len as i32
}

/// Split a concatenated label into the parts for lengths `a` and `rest`.
pub fn split_label(label: Label, a: usize) -> (Label, Label) {
    (label & ((1u32 << a) - 1), label >> a)
}

pub fn join_label(left: Label, left_len: usize, right: Label) -> Label {
    left | (right << left_len)
}

pub type Coords = BTreeMap<Label, MultiPoly>;

pub(crate) fn add_into(acc: &mut Coords, label: Label, p: &MultiPoly) {
    if p.is_zero() {
        return;
    }
    match acc.get_mut(&label) {
        Some(slot) => {
            *slot += p;
            if slot.is_zero() {
                acc.remove(&label);
            }
        }
        None => {
            acc.insert(label, p.clone());
        }
    }
}

/// An element of `B_word`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSElement {
    word: Word,
    coords: Coords,
}

impl BSElement {
    pub fn zero(word: Word) -> Self {
        BSElement { word, coords: Coords::new() }
    }

    /// The element `1 ⊗ 1 ⊗ ... ⊗ 1`.
    pub fn one_tensor(word: Word) -> Self {
        Self::basis(word, 0)
    }

    pub fn basis(word: Word, label: Label) -> Self {
        let mut coords = Coords::new();
        coords.insert(label, MultiPoly::one());
        BSElement { word, coords }
    }

    pub fn from_coords(word: Word, coords: Coords) -> Self {
        let coords = coords.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        BSElement { word, coords }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn into_coords(self) -> Coords {
        self.coords
    }

    pub fn coeff(&self, label: Label) -> MultiPoly {
        self.coords.get(&label).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add(&self, other: &BSElement) -> BSElement {
        let mut coords = self.coords.clone();
        for (l, p) in &other.coords {
            add_into(&mut coords, *l, p);
        }
        BSElement { word: self.word.clone(), coords }
    }

    /// Left multiplication by a polynomial.
    pub fn left_mul(&self, f: &MultiPoly) -> BSElement {
        let coords = self.coords.iter().map(|(l, p)| (*l, f * p)).collect();
        BSElement::from_coords(self.word.clone(), coords)
    }

    /// Right multiplication by a polynomial, renormalized.
    pub fn right_mul(&self, f: &MultiPoly) -> BSElement {
        let mut coords = Coords::new();
        for (l, p) in &self.coords {
            for (l2, q) in right_mul_label(&self.word, *l, f) {
                add_into(&mut coords, l2, &(p * &q));
            }
        }
        BSElement { word: self.word.clone(), coords }
    }
}

/// Content of the slot right of strand `k` under `label`.
fn slot_value(word: &[u8], label: Label, k: usize) -> MultiPoly {
    if label & (1 << k) != 0 {
        MultiPoly::var(word[k] as usize)
    } else {
        MultiPoly::one()
    }
}

/// Normal form of the raw tensor `g_0 ⊗ g_1 ⊗ ... ⊗ g_d` (one entry per region).
pub fn normal_form(word: &Word, slots: &[MultiPoly]) -> BSElement {
    let l = word.letters();
    let d = l.len();
    assert_eq!(slots.len(), d + 1, "one polynomial per region");
    let mut states: BTreeMap<Label, MultiPoly> = BTreeMap::new();
    states.insert(0, slots[d].clone());
    for k in (0..d).rev() {
        let mut next: BTreeMap<Label, MultiPoly> = BTreeMap::new();
        for (bits, carry) in states {
            if carry.is_zero() {
                continue;
            }
            let (p0, p1) = invariant_split(l[k] as usize, &carry).expect("letters are valid indices");
            add_into(&mut next, bits, &(&slots[k] * &p0));
            add_into(&mut next, bits | (1 << k), &(&slots[k] * &p1));
        }
        states = next;
    }
    BSElement::from_coords(word.clone(), states)
}

type RightMulKey = (Word, Label, Monomial);

fn right_mul_cache() -> &'static Mutex<HashMap<RightMulKey, Arc<Coords>>> {
    static CACHE: OnceLock<Mutex<HashMap<RightMulKey, Arc<Coords>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn right_mul_label_monomial(word: &Word, label: Label, m: &Monomial) -> Arc<Coords> {
    let key = (word.clone(), label, *m);
    if let Some(hit) = right_mul_cache().lock().unwrap().get(&key) {
        return hit.clone();
    }
    let l = word.letters();
    let d = l.len();
    let mono = MultiPoly::monomial(*m, crate::poly_core::coeff(1));
    let mut slots: Vec<MultiPoly> = (0..=d)
        .map(|k| if k == 0 { MultiPoly::one() } else { slot_value(l, label, k - 1) })
        .collect();
    slots[d] = &slots[d] * &mono;
    let out = Arc::new(normal_form(word, &slots).into_coords());
    right_mul_cache().lock().unwrap().insert(key, out.clone());
    out
}

/// `(1 ⊗ e_label) · g` in normal form.
pub fn right_mul_label(word: &Word, label: Label, g: &MultiPoly) -> Coords {
    if word.is_empty() {
        let mut c = Coords::new();
        add_into(&mut c, 0, g);
        return c;
    }
    let mut acc = Coords::new();
    for (m, c) in g.terms() {
        let part = right_mul_label_monomial(word, label, m);
        for (l2, p) in part.iter() {
            add_into(&mut acc, *l2, &p.scale(c));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let e = normal_form(&w("1"), &[p("1"), p("1")]);
        assert_eq!(e, BSElement::one_tensor(w("1")));
        let e = normal_form(&w("1"), &[p("1"), p("f1")]);
        assert_eq!(e, BSElement::basis(w("1"), 1));
        let e = normal_form(&w("1"), &[p("1"), p("f2")]);
        assert_eq!(e.coeff(0), p("f2 + 1/2*f1"));
        assert_eq!(e.coeff(1), p("-1/2"));
    }

    #[test]
    fn right_multiplication() {
        let one = BSElement::one_tensor(w("1"));
        assert_eq!(one.right_mul(&p("f1")), BSElement::basis(w("1"), 1));
        assert_eq!(one.right_mul(&MultiPoly::one()), one);
        let root = BSElement::basis(w("1"), 1);
        let sq = root.right_mul(&p("f1"));
        assert_eq!(sq.coeff(0), p("f1^2"));
        assert_eq!(sq.coeff(1), MultiPoly::zero());
    }

    #[test]
    fn right_action_is_an_action() {
        let x = BSElement::basis(w("121"), 0b101);
        let f = p("f1 + 2*f2");
        let g = p("f2*f3 - f1");
        assert_eq!(x.right_mul(&f).right_mul(&g), x.right_mul(&(&f * &g)));
    }

    #[test]
    fn label_bookkeeping() {
        assert_eq!(label_degree(0, 3), -3);
        assert_eq!(label_degree(0b101, 3), 1);
        assert_eq!(split_label(0b1101, 2), (0b01, 0b11));
        assert_eq!(join_label(0b01, 2, 0b11), 0b1101);
    }
}
