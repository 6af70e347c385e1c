//! The symmetric group `S_{n+1}`: words in simple reflections, permutations, parabolic subgroups
//! and reduced expressions.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::hecke::LaurentPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("simple reflection index {index} outside 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("cannot parse word {0:?}")]
    Parse(String),
    #[error("index set {0} is not a connected interval")]
    NotConnected(String),
}

/// A sequence of simple-reflection indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest index used, 0 for the empty word.
    pub fn max_letter(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0) as usize
    }

    /// The word read backwards.
    pub fn omega(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, letter: u8) {
        self.0.push(letter);
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// Apply a letter map (e.g. a Dynkin diagram automorphism).
    pub fn relabel(&self, f: impl Fn(u8) -> u8) -> Word {
        Word(self.0.iter().map(|&x| f(x)).collect())
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word(v)
    }
}

impl From<&[u8]> for Word {
    fn from(v: &[u8]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&x| x < 10) {
            for x in &self.0 {
                write!(f, "{}", x)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self)
    }
}

impl FromStr for Word {
    type Err = CoxeterError;

    /// Either a digit string (`"121"`) or a comma list (`"1,2,1"`); `""` is the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Word::empty());
        }
        let bad = || CoxeterError::Parse(s.to_string());
        let letters: Result<Vec<u8>, _> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse::<u8>().map_err(|_| bad())).collect()
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
                .collect()
        };
        let letters = letters?;
        if letters.contains(&0) {
            return Err(bad());
        }
        Ok(Word(letters))
    }
}

/// A permutation of `{1, ..., n+1}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    /// The identity of `S_{rank+1}`.
    pub fn identity(rank: usize) -> Self {
        Perm((1..=rank as u8 + 1).collect())
    }

    pub fn from_images(images: Vec<u8>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x as usize > n || seen[x as usize - 1] {
                return None;
            }
            seen[x as usize - 1] = true;
        }
        Some(Perm(images))
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    /// The rank `n` with `self ∈ S_{n+1}`.
    pub fn rank(&self) -> usize {
        self.0.len() - 1
    }

    /// Coxeter length, i.e. the number of inversions.
    pub fn length(&self) -> usize {
        let v = &self.0;
        let mut inv = 0;
        for a in 0..v.len() {
            for b in a + 1..v.len() {
                if v[a] > v[b] {
                    inv += 1;
                }
            }
        }
        inv
    }

    /// `w s_i` (swap positions `i`, `i+1`).
    pub fn mul_right(&self, i: usize) -> Perm {
        let mut v = self.0.clone();
        v.swap(i - 1, i);
        Perm(v)
    }

    /// `s_i w` (swap values `i`, `i+1`).
    pub fn mul_left(&self, i: usize) -> Perm {
        Perm(
            self.0
                .iter()
                .map(|&x| {
                    if x as usize == i {
                        x + 1
                    } else if x as usize == i + 1 {
                        x - 1
                    } else {
                        x
                    }
                })
                .collect(),
        )
    }

    /// Whether `l(w s_i) < l(w)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.0[i - 1] > self.0[i]
    }

    /// Whether `l(s_i w) < l(w)`.
    pub fn has_left_descent(&self, i: usize) -> bool {
        let pos = |val: usize| self.0.iter().position(|&x| x as usize == val).unwrap();
        pos(i) > pos(i + 1)
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0u8; self.0.len()];
        for (pos, &x) in self.0.iter().enumerate() {
            v[x as usize - 1] = pos as u8 + 1;
        }
        Perm(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &x)| x as usize == k + 1)
    }

    /// Some reduced word, chosen as the lexicographically smallest.
    pub fn reduced_word(&self) -> Word {
        let mut letters = Vec::new();
        let mut w = self.clone();
        // Peel right descents from the left end of the word: find a left descent each time.
        while !w.is_identity() {
            let i = (1..=w.rank()).find(|&i| w.has_left_descent(i)).unwrap();
            letters.push(i as u8);
            w = w.mul_left(i);
        }
        Word(letters)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{}", self)
    }
}

/// The product `s_{i_1} ... s_{i_d}` in `S_{rank+1}`.
pub fn eval(word: &Word, rank: usize) -> Result<Perm, CoxeterError> {
    let mut w = Perm::identity(rank);
    for &i in word.letters() {
        if i == 0 || i as usize > rank {
            return Err(CoxeterError::IndexOutOfRange { index: i as usize, rank });
        }
        w = w.mul_right(i as usize);
    }
    Ok(w)
}

/// Whether the word is a reduced expression (length equals letter count).
pub fn is_reduced(word: &Word) -> bool {
    let rank = word.max_letter().max(1);
    eval(word, rank).map(|w| w.length() == word.len()).unwrap_or(false)
}

/// A sorted set of simple-reflection indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Parabolic(Vec<usize>);

impl Parabolic {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Parabolic(v)
    }

    /// The interval `{lo, ..., hi}`.
    pub fn interval(lo: usize, hi: usize) -> Self {
        Parabolic((lo..=hi).collect())
    }

    pub fn empty() -> Self {
        Parabolic(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn max_index(&self) -> usize {
        self.0.last().copied().unwrap_or(0)
    }

    /// Whether the index set forms one interval of the Dynkin diagram.
    pub fn is_connected(&self) -> bool {
        self.0.windows(2).all(|w| w[1] == w[0] + 1)
    }

    /// Endpoints `(lo, hi)` of a connected, nonempty index set.
    pub fn bounds(&self) -> Result<(usize, usize), CoxeterError> {
        if self.0.is_empty() || !self.is_connected() {
            return Err(CoxeterError::NotConnected(self.to_string()));
        }
        Ok((self.0[0], *self.0.last().unwrap()))
    }

    /// Maximal connected pieces, left to right.
    pub fn components(&self) -> Vec<Parabolic> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for &i in &self.0 {
            match out.last_mut() {
                Some(last) if *last.last().unwrap() + 1 == i => last.push(i),
                _ => out.push(vec![i]),
            }
        }
        out.into_iter().map(Parabolic).collect()
    }

    pub fn is_subset(&self, other: &Parabolic) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    /// No index of `self` equals or neighbours an index of `other`.
    pub fn is_distant_from(&self, other: &Parabolic) -> bool {
        self.0
            .iter()
            .all(|&i| other.0.iter().all(|&j| i.abs_diff(j) >= 2))
    }

    pub fn union(&self, other: &Parabolic) -> Parabolic {
        Parabolic::new(self.0.iter().chain(other.0.iter()).copied())
    }
}

impl fmt::Display for Parabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for Parabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Parabolic{}", self)
    }
}

impl FromStr for Parabolic {
    type Err = CoxeterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        if s.is_empty() {
            return Ok(Parabolic::empty());
        }
        let v: Result<Vec<usize>, _> = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| CoxeterError::Parse(s.to_string())))
            .collect();
        let v = v?;
        if v.contains(&0) {
            return Err(CoxeterError::Parse(s.to_string()));
        }
        Ok(Parabolic::new(v))
    }
}

/// Smallest rank containing all indices of `J`.
fn rank_for(parabolic: &Parabolic, rank: usize) -> usize {
    rank.max(parabolic.max_index()).max(1)
}

/// All elements of `W_J` with their lengths, in breadth-first (length-graded) order.
pub fn parabolic_elements(parabolic: &Parabolic, rank: usize) -> Vec<(Perm, usize)> {
    let rank = rank_for(parabolic, rank);
    let start = Perm::identity(rank);
    let mut seen: HashMap<Perm, usize> = HashMap::new();
    seen.insert(start.clone(), 0);
    let mut order = vec![(start.clone(), 0)];
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        for &i in parabolic.indices() {
            let u = w.mul_right(i);
            if !seen.contains_key(&u) {
                let l = u.length();
                seen.insert(u.clone(), l);
                order.push((u.clone(), l));
                queue.push_back(u);
            }
        }
    }
    order
}

/// The longest element `w_J` and its length `d_J`.
pub fn longest(parabolic: &Parabolic, rank: usize) -> (Perm, usize) {
    parabolic_elements(parabolic, rank)
        .into_iter()
        .max_by_key(|(_, l)| *l)
        .expect("parabolic subgroup is nonempty")
}

/// Length of the longest element of `W_J`.
pub fn longest_length(parabolic: &Parabolic) -> usize {
    parabolic
        .components()
        .iter()
        .map(|c| c.len() * (c.len() + 1) / 2)
        .sum()
}

/// All reduced expressions of `w`, in lexicographic order.
pub fn reduced_words(w: &Perm) -> Vec<Word> {
    fn rec(w: &Perm, memo: &mut HashMap<Perm, Vec<Vec<u8>>>) -> Vec<Vec<u8>> {
        if let Some(v) = memo.get(w) {
            return v.clone();
        }
        let mut out = Vec::new();
        if w.is_identity() {
            out.push(Vec::new());
        } else {
            for i in 1..=w.rank() {
                if w.has_right_descent(i) {
                    for mut prefix in rec(&w.mul_right(i), memo) {
                        prefix.push(i as u8);
                        out.push(prefix);
                    }
                }
            }
        }
        memo.insert(w.clone(), out.clone());
        out
    }
    let mut memo = HashMap::new();
    let mut words: Vec<Word> = rec(w, &mut memo).into_iter().map(Word).collect();
    words.sort();
    words
}

/// `v^{-d_J} Σ_{w ∈ W_J} v^{2 l(w)}`.
pub fn hilbert(parabolic: &Parabolic) -> LaurentPoly {
    let d = longest_length(parabolic) as i32;
    let mut acc = LaurentPoly::zero();
    for (_, l) in parabolic_elements(parabolic, parabolic.max_index()) {
        acc = &acc + &LaurentPoly::monomial(2 * l as i32 - d, 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn eval_examples() {
        assert!(eval(&Word::empty(), 3).unwrap().is_identity());
        assert!(eval(&w("11"), 2).unwrap().is_identity());
        let p = eval(&w("121"), 2).unwrap();
        assert_eq!(p.images(), &[3, 2, 1]);
        assert_eq!(p.length(), 3);
        assert!(eval(&w("4"), 3).is_err());
    }

    #[test]
    fn reducedness() {
        assert!(is_reduced(&w("121")));
        assert!(!is_reduced(&w("11")));
        assert!(is_reduced(&w("2132")));
        assert!(!is_reduced(&w("12121")));
    }

    #[test]
    fn longest_lengths() {
        assert_eq!(longest(&Parabolic::new([1]), 3).1, 1);
        assert_eq!(longest(&Parabolic::new([1, 2]), 3).1, 3);
        assert_eq!(longest(&Parabolic::new([1, 2, 3]), 3).1, 6);
        assert_eq!(longest(&Parabolic::new([1, 3]), 3).1, 2);
        assert_eq!(longest_length(&Parabolic::new([1, 2, 4])), 4);
    }

    #[test]
    fn reduced_word_counts() {
        let (w12, _) = longest(&Parabolic::new([1, 2]), 2);
        assert_eq!(reduced_words(&w12), vec![w("121"), w("212")]);
        let (w123, _) = longest(&Parabolic::new([1, 2, 3]), 3);
        assert_eq!(reduced_words(&w123).len(), 16);
    }

    #[test]
    fn omega_examples() {
        assert_eq!(w("123").omega(), w("321"));
        assert_eq!(Word::empty().omega(), Word::empty());
        assert_eq!(w("121").omega(), w("121"));
    }

    #[test]
    fn descents_and_inverse() {
        let p = eval(&w("12"), 2).unwrap();
        assert!(p.has_right_descent(2));
        assert!(p.has_left_descent(1));
        assert_eq!(eval(&w("21"), 2).unwrap(), p.inverse());
        assert_eq!(p.reduced_word(), w("12"));
    }

    #[test]
    fn parabolic_structure() {
        let j = Parabolic::new([3, 1, 2, 5]);
        assert_eq!(j.components().len(), 2);
        assert!(!j.is_connected());
        assert!(Parabolic::new([1]).is_distant_from(&Parabolic::new([3, 4])));
        assert!(!Parabolic::new([2]).is_distant_from(&Parabolic::new([3, 4])));
        assert_eq!("1,2,3".parse::<Parabolic>().unwrap(), Parabolic::interval(1, 3));
    }
}
