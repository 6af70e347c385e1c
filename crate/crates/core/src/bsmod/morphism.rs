//! Graded bimodule morphisms between Bott-Samelson bimodules, stored by the images of the
//! left basis.

use std::fmt;

use serde_json::{json, Value};

use super::element::{add_into, join_label, label_degree, right_mul_label, split_label, BSElement, Coords, Label};
use super::BsError;
use crate::coxeter::Word;
use crate::poly_core::{Coeff, MultiPoly};

/// Longest word whose bimodule we are willing to expand densely.
pub const MAX_WORD_LEN: usize = 16;

#[derive(Clone)]
pub struct BSMorphism {
    source: Word,
    target: Word,
    degree: i32,
    /// `columns[E]` is the image of the basis element `E` of the source.
    columns: Vec<Coords>,
}

impl BSMorphism {
    pub fn from_columns(source: Word, target: Word, degree: i32, columns: Vec<Coords>) -> Result<Self, BsError> {
        if source.len() > MAX_WORD_LEN || target.len() > MAX_WORD_LEN {
            return Err(BsError::TooLarge(source.len().max(target.len())));
        }
        if columns.len() != 1 << source.len() {
            return Err(BsError::Shape { expected: 1 << source.len(), got: columns.len() });
        }
        let m = BSMorphism { source, target, degree, columns };
        m.check_degree()?;
        Ok(m)
    }

    pub(crate) fn from_columns_unchecked(source: Word, target: Word, degree: i32, columns: Vec<Coords>) -> Self {
        BSMorphism { source, target, degree, columns }
    }

    pub fn identity(word: Word) -> Self {
        let columns = (0..1u32 << word.len())
            .map(|l| {
                let mut c = Coords::new();
                c.insert(l, MultiPoly::one());
                c
            })
            .collect();
        BSMorphism { source: word.clone(), target: word, degree: 0, columns }
    }

    pub fn zero(source: Word, target: Word, degree: i32) -> Self {
        let columns = vec![Coords::new(); 1 << source.len()];
        BSMorphism { source, target, degree, columns }
    }

    pub fn source(&self) -> &Word {
        &self.source
    }

    pub fn target(&self) -> &Word {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn columns(&self) -> &[Coords] {
        &self.columns
    }

    pub fn column(&self, label: Label) -> &Coords {
        &self.columns[label as usize]
    }

    /// Entry at (target label, source label).
    pub fn entry(&self, row: Label, col: Label) -> MultiPoly {
        self.columns[col as usize].get(&row).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    /// Every entry has the degree forced by the morphism degree and the label degrees.
    pub fn check_degree(&self) -> Result<(), BsError> {
        let (ds, dt) = (self.source.len(), self.target.len());
        for (e, col) in self.columns.iter().enumerate() {
            for (f, p) in col {
                let want = self.degree + label_degree(e as Label, ds) - label_degree(*f, dt);
                match p.homogeneous_degree() {
                    Some(g) if g == want => {}
                    _ => {
                        return Err(BsError::Degree { row: *f, col: e as Label, expected: want, entry: p.to_string() })
                    }
                }
            }
        }
        Ok(())
    }

    /// Image of an element of the source.
    pub fn apply(&self, x: &BSElement) -> BSElement {
        let mut out = Coords::new();
        for (e, c) in x.coords() {
            for (f, p) in &self.columns[*e as usize] {
                add_into(&mut out, *f, &(c * p));
            }
        }
        BSElement::from_coords(self.target.clone(), out)
    }

    fn apply_coords(&self, x: &Coords) -> Coords {
        let mut out = Coords::new();
        for (e, c) in x {
            for (f, p) in &self.columns[*e as usize] {
                add_into(&mut out, *f, &(c * p));
            }
        }
        out
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &BSMorphism) -> Result<BSMorphism, BsError> {
        if first.target != self.source {
            return Err(BsError::Mismatch { left: first.target.to_string(), right: self.source.to_string() });
        }
        let columns = first.columns.iter().map(|c| self.apply_coords(c)).collect();
        Ok(BSMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            degree: self.degree + first.degree,
            columns,
        })
    }

    /// `id_prefix ⊗ self ⊗ id_suffix` applied after `input` (whose target must be
    /// `prefix · source · suffix`).
    pub fn apply_as_layer(&self, prefix: &Word, suffix: &Word, input: &BSMorphism) -> Result<BSMorphism, BsError> {
        let expected = prefix.concat(&self.source).concat(suffix);
        if input.target != expected {
            return Err(BsError::Mismatch { left: input.target.to_string(), right: expected.to_string() });
        }
        let (a, s, t) = (prefix.len(), self.source.len(), self.target.len());
        let new_target = prefix.concat(&self.target).concat(suffix);
        if new_target.len() > MAX_WORD_LEN {
            return Err(BsError::TooLarge(new_target.len()));
        }
        let mut columns = Vec::with_capacity(input.columns.len());
        for col in &input.columns {
            let mut out = Coords::new();
            for (label, c) in col {
                let (ea, rest) = split_label(*label, a);
                let (em, eb) = split_label(rest, s);
                for (f, d) in &self.columns[em as usize] {
                    let mid_rest = join_label(*f, t, eb);
                    for (ea2, h) in right_mul_label(prefix, ea, d) {
                        add_into(&mut out, join_label(ea2, a, mid_rest), &(c * &h));
                    }
                }
            }
            columns.push(out);
        }
        Ok(BSMorphism {
            source: input.source.clone(),
            target: new_target,
            degree: input.degree + self.degree,
            columns,
        })
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &BSMorphism) -> Result<BSMorphism, BsError> {
        let start = BSMorphism::identity(self.source.concat(&other.source));
        let step = other.apply_as_layer(&self.source, &Word::empty(), &start)?;
        self.apply_as_layer(&Word::empty(), &other.target, &step)
    }

    pub fn add(&self, other: &BSMorphism) -> Result<BSMorphism, BsError> {
        self.same_shape(other)?;
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut c = a.clone();
                for (l, p) in b {
                    add_into(&mut c, *l, p);
                }
                c
            })
            .collect();
        let degree = if self.is_zero() { other.degree } else { self.degree };
        Ok(BSMorphism { source: self.source.clone(), target: self.target.clone(), degree, columns })
    }

    pub fn sub(&self, other: &BSMorphism) -> Result<BSMorphism, BsError> {
        self.add(&other.scale(&Coeff::from_integer((-1).into())))
    }

    pub fn scale(&self, c: &Coeff) -> BSMorphism {
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(l, p)| (*l, p.scale(c))).filter(|(_, p)| !p.is_zero()).collect())
            .collect();
        BSMorphism { source: self.source.clone(), target: self.target.clone(), degree: self.degree, columns }
    }

    /// Left multiplication of every entry by a polynomial of the given grading degree.
    pub fn left_mul(&self, f: &MultiPoly, f_degree: i32) -> BSMorphism {
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(l, p)| (*l, f * p)).filter(|(_, p)| !p.is_zero()).collect())
            .collect();
        BSMorphism { source: self.source.clone(), target: self.target.clone(), degree: self.degree + f_degree, columns }
    }

    fn same_shape(&self, other: &BSMorphism) -> Result<(), BsError> {
        if self.source != other.source || self.target != other.target {
            return Err(BsError::Mismatch {
                left: format!("{}->{}", self.source, self.target),
                right: format!("{}->{}", other.source, other.target),
            });
        }
        Ok(())
    }

    /// Whether the map commutes with right multiplication by `f_1, ..., f_nvars`.
    pub fn is_bimodule_map(&self, nvars: usize) -> bool {
        for k in 1..=nvars {
            let f = MultiPoly::var(k);
            for e in 0..self.columns.len() as Label {
                let lhs = self.apply_coords(&right_mul_label(&self.source, e, &f));
                let mut rhs = Coords::new();
                for (l, p) in &self.columns[e as usize] {
                    for (l2, q) in right_mul_label(&self.target, *l, &f) {
                        add_into(&mut rhs, l2, &(p * &q));
                    }
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Numbers of variables used by the words and entries.
    pub fn nvars(&self) -> usize {
        let mut n = self.source.max_letter().max(self.target.max_letter()) + 1;
        for col in &self.columns {
            for p in col.values() {
                n = n.max(p.top_var());
            }
        }
        n
    }

    /// Substitute rational values for the variables in every entry (rows indexed by target labels).
    pub fn evaluate(&self, point: &[Coeff]) -> Vec<Vec<Coeff>> {
        let rows = 1usize << self.target.len();
        let mut out = vec![vec![Coeff::from_integer(0.into()); self.columns.len()]; rows];
        for (e, col) in self.columns.iter().enumerate() {
            for (f, p) in col {
                out[*f as usize][e] = p.evaluate(point);
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows = 1usize << self.target.len();
        let matrix: Vec<Vec<String>> = (0..rows)
            .map(|f| {
                (0..self.columns.len())
                    .map(|e| self.entry(f as Label, e as Label).to_string())
                    .collect()
            })
            .collect();
        json!({
            "source": self.source.letters(),
            "target": self.target.letters(),
            "degree": self.degree,
            "matrix": matrix,
        })
    }
}

impl PartialEq for BSMorphism {
    /// Zero maps are equal regardless of their nominal degree.
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.columns == other.columns
            && (self.degree == other.degree || self.is_zero())
    }
}

impl Eq for BSMorphism {}

impl fmt::Debug for BSMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BSMorphism({} -> {}, deg {}", self.source, self.target, self.degree)?;
        for (e, col) in self.columns.iter().enumerate() {
            for (l, p) in col {
                write!(f, "; [{:b}->{:b}] {}", e, l, p)?;
            }
        }
        write!(f, ")")
    }
}
