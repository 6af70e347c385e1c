//! Generators of the diagrammatic category and composite diagrams, evaluated to bimodule maps.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::element::{right_mul_label, Coords, Label};
use super::morphism::BSMorphism;
use super::BsError;
use crate::coxeter::{Parabolic, Word};
use crate::exprgraph::{EdgeKind, Path};
use crate::linalg::{solve, sparse_from, SparseRow};
use crate::poly_core::{coeff, dual_bases, ratio, Coeff, Monomial, MultiPoly};

/// One elementary diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gen {
    /// Dot ending a strand: `B_i → R`, degree +1.
    Counit(u8),
    /// Dot starting a strand: `R → B_i`, degree +1.
    Unit(u8),
    /// Trivalent vertex `B_i → B_i B_i`, degree -1.
    Split(u8),
    /// Trivalent vertex `B_i B_i → B_i`, degree -1.
    Merge(u8),
    /// Crossing of distant colours `B_i B_j → B_j B_i`.
    Cross(u8, u8),
    /// Six-valent vertex of adjacent colours `B_i B_j B_i → B_j B_i B_j`.
    Six(u8, u8),
    /// A homogeneous polynomial in the empty region.
    Poly(MultiPoly),
}

impl Gen {
    pub fn source(&self) -> Word {
        match self {
            Gen::Counit(i) | Gen::Split(i) => Word::new(vec![*i]),
            Gen::Unit(_) | Gen::Poly(_) => Word::empty(),
            Gen::Merge(i) => Word::new(vec![*i, *i]),
            Gen::Cross(i, j) => Word::new(vec![*i, *j]),
            Gen::Six(i, j) => Word::new(vec![*i, *j, *i]),
        }
    }

    pub fn target(&self) -> Word {
        match self {
            Gen::Unit(i) | Gen::Merge(i) => Word::new(vec![*i]),
            Gen::Counit(_) | Gen::Poly(_) => Word::empty(),
            Gen::Split(i) => Word::new(vec![*i, *i]),
            Gen::Cross(i, j) => Word::new(vec![*j, *i]),
            Gen::Six(i, j) => Word::new(vec![*j, *i, *j]),
        }
    }

    pub fn degree(&self) -> i32 {
        match self {
            Gen::Counit(_) | Gen::Unit(_) => 1,
            Gen::Split(_) | Gen::Merge(_) => -1,
            Gen::Cross(..) | Gen::Six(..) => 0,
            Gen::Poly(p) => p.homogeneous_degree().unwrap_or(0),
        }
    }

    /// The upside-down diagram.
    pub fn vflip(&self) -> Gen {
        match self {
            Gen::Counit(i) => Gen::Unit(*i),
            Gen::Unit(i) => Gen::Counit(*i),
            Gen::Split(i) => Gen::Merge(*i),
            Gen::Merge(i) => Gen::Split(*i),
            Gen::Cross(i, j) => Gen::Cross(*j, *i),
            Gen::Six(i, j) => Gen::Six(*j, *i),
            Gen::Poly(p) => Gen::Poly(p.clone()),
        }
    }

    /// The mirror image.
    pub fn hflip(&self) -> Gen {
        match self {
            Gen::Cross(i, j) => Gen::Cross(*j, *i),
            other => other.clone(),
        }
    }

    pub fn relabel(&self, f: &impl Fn(u8) -> u8) -> Gen {
        match self {
            Gen::Counit(i) => Gen::Counit(f(*i)),
            Gen::Unit(i) => Gen::Unit(f(*i)),
            Gen::Split(i) => Gen::Split(f(*i)),
            Gen::Merge(i) => Gen::Merge(f(*i)),
            Gen::Cross(i, j) => Gen::Cross(f(*i), f(*j)),
            Gen::Six(i, j) => Gen::Six(f(*i), f(*j)),
            Gen::Poly(p) => Gen::Poly(p.relabel_vars(|k| f(k as u8) as usize)),
        }
    }

    pub fn morphism(&self) -> Result<BSMorphism, BsError> {
        let one = |l: Label, p: MultiPoly| {
            let mut c = Coords::new();
            if !p.is_zero() {
                c.insert(l, p);
            }
            c
        };
        match self {
            Gen::Counit(i) => BSMorphism::from_columns(
                self.source(),
                self.target(),
                1,
                vec![one(0, MultiPoly::one()), one(0, MultiPoly::var(*i as usize))],
            ),
            Gen::Unit(i) => {
                let mut c = Coords::new();
                c.insert(0, MultiPoly::var(*i as usize).scale(&ratio(1, 2)));
                c.insert(1, MultiPoly::constant(ratio(1, 2)));
                BSMorphism::from_columns(self.source(), self.target(), 1, vec![c])
            }
            Gen::Split(_) => BSMorphism::from_columns(
                self.source(),
                self.target(),
                -1,
                vec![one(0b00, MultiPoly::one()), one(0b10, MultiPoly::one())],
            ),
            Gen::Merge(_) => BSMorphism::from_columns(
                self.source(),
                self.target(),
                -1,
                vec![
                    Coords::new(),
                    one(0, MultiPoly::from_int(2)),
                    Coords::new(),
                    one(1, MultiPoly::from_int(2)),
                ],
            ),
            Gen::Cross(i, j) => {
                if i.abs_diff(*j) < 2 {
                    return Err(BsError::Colours(format!("crossing needs distant colours, got {i},{j}")));
                }
                let target = self.target();
                let columns = (0..4u32)
                    .map(|e| {
                        let mut g = MultiPoly::one();
                        if e & 1 != 0 {
                            g = &g * &MultiPoly::var(*i as usize);
                        }
                        if e & 2 != 0 {
                            g = &g * &MultiPoly::var(*j as usize);
                        }
                        right_mul_label(&target, 0, &g)
                    })
                    .collect();
                BSMorphism::from_columns(self.source(), target, 0, columns)
            }
            Gen::Six(i, j) => six_valent(*i, *j).map(|m| (*m).clone()),
            Gen::Poly(p) => {
                let deg = p.homogeneous_degree().unwrap_or(0);
                BSMorphism::from_columns(Word::empty(), Word::empty(), deg, vec![one(0, p.clone())])
            }
        }
    }
}

/// A composite diagram.
#[derive(Clone, Debug)]
pub enum Diagram {
    Gen(Gen),
    Id(Word),
    /// Applied first to last (bottom to top).
    Compose(Vec<Diagram>),
    /// Side by side, left to right.
    Tensor(Vec<Diagram>),
    /// A precomputed map, optionally with its upside-down version.
    Matrix(Arc<BSMorphism>, Option<Arc<BSMorphism>>),
    /// A rational linear combination of diagrams with common boundary.
    Sum(Vec<(Coeff, Diagram)>),
}

impl From<Gen> for Diagram {
    fn from(g: Gen) -> Self {
        Diagram::Gen(g)
    }
}

impl Diagram {
    pub fn id(word: &Word) -> Diagram {
        Diagram::Id(word.clone())
    }

    pub fn matrix(m: BSMorphism) -> Diagram {
        Diagram::Matrix(Arc::new(m), None)
    }

    /// `id_prefix ⊗ d ⊗ id_suffix`.
    pub fn layer(prefix: &Word, d: impl Into<Diagram>, suffix: &Word) -> Diagram {
        let mut parts = Vec::new();
        if !prefix.is_empty() {
            parts.push(Diagram::Id(prefix.clone()));
        }
        parts.push(d.into());
        if !suffix.is_empty() {
            parts.push(Diagram::Id(suffix.clone()));
        }
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Diagram::Tensor(parts)
        }
    }

    /// `self` then `next` on top.
    pub fn then(self, next: impl Into<Diagram>) -> Diagram {
        match self {
            Diagram::Compose(mut v) => {
                v.push(next.into());
                Diagram::Compose(v)
            }
            other => Diagram::Compose(vec![other, next.into()]),
        }
    }

    /// Polynomial `f` in the leftmost region of `id_word`.
    pub fn poly_left(f: MultiPoly, word: &Word) -> Diagram {
        Diagram::layer(&Word::empty(), Gen::Poly(f), word)
    }

    /// Polynomial `f` in the rightmost region of `id_word`.
    pub fn poly_right(word: &Word, f: MultiPoly) -> Diagram {
        Diagram::layer(word, Gen::Poly(f), &Word::empty())
    }

    pub fn sum(terms: Vec<(Coeff, Diagram)>) -> Diagram {
        Diagram::Sum(terms)
    }

    pub fn tensor(self, right: impl Into<Diagram>) -> Diagram {
        match self {
            Diagram::Tensor(mut v) => {
                v.push(right.into());
                Diagram::Tensor(v)
            }
            other => Diagram::Tensor(vec![other, right.into()]),
        }
    }

    pub fn source(&self) -> Word {
        match self {
            Diagram::Gen(g) => g.source(),
            Diagram::Id(w) => w.clone(),
            Diagram::Compose(v) => v.first().map(|d| d.source()).unwrap_or_default(),
            Diagram::Tensor(v) => v.iter().fold(Word::empty(), |acc, d| acc.concat(&d.source())),
            Diagram::Matrix(m, _) => m.source().clone(),
            Diagram::Sum(v) => v.first().map(|(_, d)| d.source()).unwrap_or_default(),
        }
    }

    pub fn target(&self) -> Word {
        match self {
            Diagram::Gen(g) => g.target(),
            Diagram::Id(w) => w.clone(),
            Diagram::Compose(v) => v.last().map(|d| d.target()).unwrap_or_default(),
            Diagram::Tensor(v) => v.iter().fold(Word::empty(), |acc, d| acc.concat(&d.target())),
            Diagram::Matrix(m, _) => m.target().clone(),
            Diagram::Sum(v) => v.first().map(|(_, d)| d.target()).unwrap_or_default(),
        }
    }

    pub fn degree(&self) -> i32 {
        match self {
            Diagram::Gen(g) => g.degree(),
            Diagram::Id(_) => 0,
            Diagram::Compose(v) | Diagram::Tensor(v) => v.iter().map(|d| d.degree()).sum(),
            Diagram::Matrix(m, _) => m.degree(),
            Diagram::Sum(v) => v.first().map(|(_, d)| d.degree()).unwrap_or(0),
        }
    }

    /// The upside-down diagram.
    pub fn vflip(&self) -> Result<Diagram, BsError> {
        Ok(match self {
            Diagram::Gen(g) => Diagram::Gen(g.vflip()),
            Diagram::Id(w) => Diagram::Id(w.clone()),
            Diagram::Compose(v) => Diagram::Compose(v.iter().rev().map(|d| d.vflip()).collect::<Result<_, _>>()?),
            Diagram::Tensor(v) => Diagram::Tensor(v.iter().map(|d| d.vflip()).collect::<Result<_, _>>()?),
            Diagram::Matrix(m, Some(f)) => Diagram::Matrix(f.clone(), Some(m.clone())),
            Diagram::Matrix(_, None) => return Err(BsError::NotFlippable),
            Diagram::Sum(v) => Diagram::Sum(v.iter().map(|(c, d)| Ok((c.clone(), d.vflip()?))).collect::<Result<_, BsError>>()?),
        })
    }

    /// The mirror image.
    pub fn hflip(&self) -> Result<Diagram, BsError> {
        Ok(match self {
            Diagram::Gen(g) => Diagram::Gen(g.hflip()),
            Diagram::Id(w) => Diagram::Id(w.omega()),
            Diagram::Compose(v) => Diagram::Compose(v.iter().map(|d| d.hflip()).collect::<Result<_, _>>()?),
            Diagram::Tensor(v) => Diagram::Tensor(v.iter().rev().map(|d| d.hflip()).collect::<Result<_, _>>()?),
            Diagram::Matrix(..) => return Err(BsError::NotFlippable),
            Diagram::Sum(v) => Diagram::Sum(v.iter().map(|(c, d)| Ok((c.clone(), d.hflip()?))).collect::<Result<_, BsError>>()?),
        })
    }

    /// Rename colours (and variables accordingly).
    pub fn relabel(&self, f: &impl Fn(u8) -> u8) -> Diagram {
        match self {
            Diagram::Gen(g) => Diagram::Gen(g.relabel(f)),
            Diagram::Id(w) => Diagram::Id(w.relabel(f)),
            Diagram::Compose(v) => Diagram::Compose(v.iter().map(|d| d.relabel(f)).collect()),
            Diagram::Tensor(v) => Diagram::Tensor(v.iter().map(|d| d.relabel(f)).collect()),
            Diagram::Matrix(m, fl) => Diagram::Matrix(
                Arc::new(m.relabel(f)),
                fl.as_ref().map(|x| Arc::new(x.relabel(f))),
            ),
            Diagram::Sum(v) => Diagram::Sum(v.iter().map(|(c, d)| (c.clone(), d.relabel(f))).collect()),
        }
    }

    pub fn eval(&self) -> Result<BSMorphism, BsError> {
        self.eval_after(&BSMorphism::identity(self.source()))
    }

    /// `self ∘ input`.
    pub fn eval_after(&self, input: &BSMorphism) -> Result<BSMorphism, BsError> {
        match self {
            Diagram::Gen(g) => g.morphism()?.after(input),
            Diagram::Id(w) => {
                if input.target() != w {
                    return Err(BsError::Mismatch { left: input.target().to_string(), right: w.to_string() });
                }
                Ok(input.clone())
            }
            Diagram::Compose(v) => {
                let mut cur = input.clone();
                for d in v {
                    cur = d.eval_after(&cur)?;
                }
                Ok(cur)
            }
            Diagram::Tensor(v) => {
                let sources: Vec<Word> = v.iter().map(|d| d.source()).collect();
                let targets: Vec<Word> = v.iter().map(|d| d.target()).collect();
                let mut cur = input.clone();
                for idx in (0..v.len()).rev() {
                    if let Diagram::Id(_) = v[idx] {
                        continue;
                    }
                    let prefix = sources[..idx].iter().fold(Word::empty(), |a, w| a.concat(w));
                    let suffix = targets[idx + 1..].iter().fold(Word::empty(), |a, w| a.concat(w));
                    let local = v[idx].eval()?;
                    cur = local.apply_as_layer(&prefix, &suffix, &cur)?;
                }
                Ok(cur)
            }
            Diagram::Matrix(m, _) => m.after(input),
            Diagram::Sum(v) => {
                let mut acc = BSMorphism::zero(input.source().clone(), self.target(), input.degree() + self.degree());
                for (c, d) in v {
                    acc = acc.add(&d.eval_after(input)?.scale(c))?;
                }
                Ok(acc)
            }
        }
    }
}

/// The path morphism: a 6-valent vertex for each braid move and a crossing for each
/// commutation.
pub fn path_diagram(path: &Path) -> Diagram {
    let words = path.words();
    if path.moves().is_empty() {
        return Diagram::Id(path.start().clone());
    }
    let layers = path
        .moves()
        .iter()
        .zip(&words)
        .map(|(m, w)| {
            let l = w.letters();
            let (a, b) = (l[m.pos], l[m.pos + 1]);
            let (gen, width) = match m.kind {
                EdgeKind::Adjacent => (Gen::Six(a, b), 3),
                EdgeKind::Distant => (Gen::Cross(a, b), 2),
            };
            Diagram::layer(&w.slice(0, m.pos), gen, &w.slice(m.pos + width, w.len()))
        })
        .collect();
    Diagram::Compose(layers)
}

impl BSMorphism {
    /// Rename colours and variables by `f`.
    pub fn relabel(&self, f: &impl Fn(u8) -> u8) -> BSMorphism {
        let columns = self
            .columns()
            .iter()
            .map(|col| col.iter().map(|(l, p)| (*l, p.relabel_vars(|k| f(k as u8) as usize))).collect())
            .collect();
        BSMorphism::from_columns_unchecked(self.source().relabel(f), self.target().relabel(f), self.degree(), columns)
    }
}

fn six_cache() -> &'static Mutex<HashMap<(u8, u8), Arc<BSMorphism>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u8, u8), Arc<BSMorphism>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The two maps through `B_i` inside `B_i B_j B_i`: projection `π` and inclusion `ι`.
pub fn six_side_maps(i: u8, j: u8) -> (Diagram, Diagram) {
    let wi = Word::new(vec![i]);
    let pi = Diagram::layer(&wi, Gen::Counit(j), &wi).then(Gen::Merge(i));
    let iota = Diagram::Gen(Gen::Split(i)).then(Diagram::layer(&wi, Gen::Unit(j), &wi));
    (pi, iota)
}

/// The six-valent vertex, built as (inclusion of `B_{ij}`) ∘ (projection of `B_iB_jB_i` onto
/// the complement of `B_i`).
pub fn six_valent(i: u8, j: u8) -> Result<Arc<BSMorphism>, BsError> {
    if i.abs_diff(j) != 1 {
        return Err(BsError::Colours(format!("six-valent vertex needs adjacent colours, got {i},{j}")));
    }
    if let Some(hit) = six_cache().lock().unwrap().get(&(i, j)) {
        return Ok(hit.clone());
    }
    let shift = i.min(j) - 1;
    let m = if shift == 0 {
        build_six(i, j)?
    } else {
        let base = six_valent(i - shift, j - shift)?;
        base.relabel(&|k| k + shift)
    };
    let m = Arc::new(m);
    six_cache().lock().unwrap().insert((i, j), m.clone());
    Ok(m)
}

fn build_six(i: u8, j: u8) -> Result<BSMorphism, BsError> {
    let iji = Word::new(vec![i, j, i]);
    let jij = Word::new(vec![j, i, j]);
    let (pi, iota) = six_side_maps(i, j);
    let (pi, iota) = (pi.eval()?, iota.eval()?);
    let loop_map = pi.after(&iota)?;
    let c0 = loop_map.entry(0, 0).constant_term();
    if c0 == Coeff::from_integer(0.into())
        || loop_map != BSMorphism::identity(Word::new(vec![i])).scale(&c0)
    {
        return Err(BsError::Solve("π∘ι is not a nonzero scalar".into()));
    }
    let e2 = iota.after(&pi)?.scale(&(Coeff::from_integer(1.into()) / &c0));
    let e1 = BSMorphism::identity(iji.clone()).sub(&e2)?;

    let parabolic = Parabolic::new([i as usize, j as usize]);
    let bases = dual_bases(&parabolic).map_err(|e| BsError::Solve(e.to_string()))?;
    let vars = [i as usize, j as usize];
    let incl_src: Vec<Coords> = bases.basis.iter().map(|g| right_mul_label(&iji, 0, g)).collect();
    let incl_tgt: Vec<Coords> = bases.basis.iter().map(|g| right_mul_label(&jij, 0, g)).collect();

    let mut columns = Vec::with_capacity(8);
    for e in 0..8u32 {
        let want = e1.column(e);
        let deg_e = super::element::label_degree(e, 3);
        // Unknowns: coefficients of q_r, homogeneous of degree (deg_e + 3 - 2 l(r)) / 2.
        let mut unknowns: Vec<(usize, Monomial)> = Vec::new();
        for (r, g) in bases.basis.iter().enumerate() {
            let twice = deg_e + 3 - g.homogeneous_degree().unwrap_or(0);
            if twice >= 0 && twice % 2 == 0 {
                for m in Monomial::all_of_degree(&vars, (twice / 2) as u32) {
                    unknowns.push((r, m));
                }
            }
        }
        let mut rows: HashMap<(Label, Monomial), SparseRow> = HashMap::new();
        for (k, (r, m)) in unknowns.iter().enumerate() {
            for (f, p) in &incl_src[*r] {
                for (mono, c) in p.terms() {
                    rows.entry((*f, mono.mul(m))).or_default().push((k, c.clone()));
                }
            }
        }
        for (f, p) in want {
            for (mono, _) in p.terms() {
                rows.entry((*f, *mono)).or_default();
            }
        }
        let eqs: Vec<(SparseRow, Coeff)> = rows
            .into_iter()
            .map(|((f, mono), row)| {
                let rhs = want.get(&f).map(|p| p.coefficient(&mono)).unwrap_or_else(|| coeff(0));
                (sparse_from(row), rhs)
            })
            .collect();
        let x = solve(unknowns.len(), eqs).ok_or_else(|| BsError::Solve(format!("six-valent column {e:03b}")))?;
        let mut col = Coords::new();
        for ((r, m), c) in unknowns.iter().zip(x) {
            if c == coeff(0) {
                continue;
            }
            for (f, p) in &incl_tgt[*r] {
                super::element::add_into(&mut col, *f, &p.mul_monomial(m, &c));
            }
        }
        columns.push(col);
    }
    BSMorphism::from_columns(iji, jij, 0, columns)
}

/// The scalar `c` with `π ∘ ι = c · id` for the adjacent pair `(i, j)`.
pub fn six_loop_scalar(i: u8, j: u8) -> Result<Coeff, BsError> {
    let (pi, iota) = six_side_maps(i, j);
    Ok(pi.eval()?.after(&iota.eval()?)?.entry(0, 0).constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bsmod::element::BSElement;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn dots_and_barbell() {
        let barbell = Diagram::Gen(Gen::Unit(1)).then(Gen::Counit(1)).eval().unwrap();
        assert_eq!(barbell.entry(0, 0), MultiPoly::var(1));
        assert_eq!(barbell.degree(), 2);
        let counit = Gen::Counit(1).morphism().unwrap();
        assert_eq!(counit.apply(&BSElement::one_tensor(w("1"))).coeff(0), MultiPoly::one());
    }

    #[test]
    fn merge_and_split() {
        let merge = Gen::Merge(1).morphism().unwrap();
        let x = BSElement::basis(w("11"), 0b01);
        assert_eq!(merge.apply(&x), BSElement::basis(w("1"), 0).left_mul(&MultiPoly::from_int(2)));
        assert!(merge.apply(&BSElement::one_tensor(w("11"))).is_zero());
        let split = Gen::Split(1).morphism().unwrap();
        assert_eq!(split.apply(&BSElement::basis(w("1"), 1)), BSElement::basis(w("11"), 0b10));
    }

    #[test]
    fn crossings() {
        let c = Gen::Cross(1, 3).morphism().unwrap();
        assert_eq!(c.apply(&BSElement::one_tensor(w("13"))), BSElement::one_tensor(w("31")));
        assert_eq!(c.apply(&BSElement::basis(w("13"), 0b01)), BSElement::basis(w("31"), 0b10));
        let twice = Diagram::Gen(Gen::Cross(1, 3)).then(Gen::Cross(3, 1)).eval().unwrap();
        assert_eq!(twice, BSMorphism::identity(w("13")));
        assert!(Gen::Cross(1, 2).morphism().is_err());
    }

    #[test]
    fn six_valent_vertex() {
        assert_eq!(six_loop_scalar(1, 2).unwrap(), coeff(-1));
        let s = six_valent(1, 2).unwrap();
        assert_eq!(s.apply(&BSElement::one_tensor(w("121"))), BSElement::one_tensor(w("212")));
        assert!(s.is_bimodule_map(3));
        let s32 = six_valent(3, 2).unwrap();
        assert!(s32.is_bimodule_map(4));
        assert_eq!(s32.apply(&BSElement::one_tensor(w("323"))), BSElement::one_tensor(w("232")));
    }

    #[test]
    fn generators_are_bimodule_maps() {
        for g in [Gen::Counit(2), Gen::Unit(2), Gen::Split(2), Gen::Merge(2), Gen::Cross(1, 3)] {
            assert!(g.morphism().unwrap().is_bimodule_map(4), "{g:?}");
        }
    }
}
