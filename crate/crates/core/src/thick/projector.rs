//! Path morphisms and the consistent family of projectors `φ_{x,y}` on the reduced
//! expressions of `w_J`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::ThickError;
use crate::bsmod::{path_diagram, BSMorphism, Coords};
use crate::coxeter::{Parabolic, Word};
use crate::exprgraph::{canonical_vertex, v_path, Canonical, EdgeKind, GraphError, ParabolicGraph, Path};
use crate::linalg::dense_rank;
use crate::poly_core::{Coeff, MultiPoly};
use crate::report::CheckReport;

/// The morphism assigned to a path: crossings for commutations, six-valent vertices for
/// braid moves.
pub fn path_morphism(path: &Path) -> Result<BSMorphism, ThickError> {
    Ok(path_diagram(path).eval()?)
}

/// `z_J`, the path morphism of `V_J` from `s^R_J` to `t^R_J`.
pub fn z(parabolic: &Parabolic) -> Result<BSMorphism, ThickError> {
    path_morphism(&v_path(parabolic)?)
}

/// `z_J` upside down.
pub fn zbar(parabolic: &Parabolic) -> Result<BSMorphism, ThickError> {
    path_morphism(&v_path(parabolic)?.reversed())
}

/// The moves `from..to` of a path, as a path of their own.
pub(crate) fn sub_path(path: &Path, from: usize, to: usize) -> Path {
    let words = path.words();
    let mut out = Path::empty(words[from].clone());
    for m in &path.moves()[from..to] {
        out.push(m.pos, m.kind).expect("moves of a valid path");
    }
    out
}

/// One braid move of `V_J`: the move index and the words on either side.
#[derive(Debug, Clone)]
pub struct VStep {
    pub index: usize,
    pub before: Word,
    pub after: Word,
}

/// The family `φ_{x,y} = x ↓ t ↗ s ↓ y` for a connected `J`.
pub struct ProjectorFamily {
    parabolic: Parabolic,
    graph: ParabolicGraph,
    source: Word,
    sink: Word,
    v: Path,
    z: BSMorphism,
    zbar: BSMorphism,
    transitions: Mutex<HashMap<(Word, Word), Arc<BSMorphism>>>,
}

impl ProjectorFamily {
    pub fn new(parabolic: &Parabolic) -> Result<Self, ThickError> {
        if parabolic.is_empty() || !parabolic.is_connected() {
            return Err(ThickError::Disconnected(parabolic.to_string()));
        }
        let graph = ParabolicGraph::build(parabolic)?;
        let v = v_path(parabolic)?;
        let z = path_morphism(&v)?;
        let zbar = path_morphism(&v.reversed())?;
        Ok(ProjectorFamily {
            parabolic: parabolic.clone(),
            graph,
            source: canonical_vertex(parabolic, Canonical::SourceRight, None)?,
            sink: canonical_vertex(parabolic, Canonical::SinkRight, None)?,
            v,
            z,
            zbar,
            transitions: Mutex::new(HashMap::new()),
        })
    }

    pub fn parabolic(&self) -> &Parabolic {
        &self.parabolic
    }

    pub fn graph(&self) -> &ParabolicGraph {
        &self.graph
    }

    /// `s^R_J`.
    pub fn source(&self) -> &Word {
        &self.source
    }

    /// `t^R_J`.
    pub fn sink(&self) -> &Word {
        &self.sink
    }

    pub fn v_path(&self) -> &Path {
        &self.v
    }

    pub fn z(&self) -> &BSMorphism {
        &self.z
    }

    pub fn zbar(&self) -> &BSMorphism {
        &self.zbar
    }

    /// Number of polynomial variables in play.
    pub fn nvars(&self) -> usize {
        self.parabolic.max_index()
    }

    /// `|W_J|`.
    pub fn group_order(&self) -> usize {
        (1..=self.parabolic.len() + 1).product()
    }

    /// One representative word per vertex of the conflated graph.
    pub fn classes(&self) -> Vec<Word> {
        self.graph.class_words().to_vec()
    }

    /// The braid moves of `V_J` with the words on either side.
    pub fn v_steps(&self) -> Vec<VStep> {
        let words = self.v.words();
        self.v
            .moves()
            .iter()
            .enumerate()
            .filter(|(_, m)| m.kind == EdgeKind::Adjacent)
            .map(|(k, _)| VStep { index: k, before: words[k].clone(), after: words[k + 1].clone() })
            .collect()
    }

    /// One word per class visited by `V_J`, in order.
    pub fn v_vertices(&self) -> Vec<Word> {
        let mut out = vec![self.source.clone()];
        out.extend(self.v_steps().into_iter().map(|s| s.after));
        if out.last() != Some(&self.sink) {
            out.push(self.sink.clone());
        }
        out
    }

    fn oriented(&self, from: &Word, to: &Word) -> Result<Path, ThickError> {
        self.graph
            .oriented_path(from, to)
            .ok_or_else(|| GraphError::NoPath { from: from.to_string(), to: to.to_string() }.into())
    }

    /// The path `x ↓ t ↗ s ↓ y`.
    pub fn phi_path(&self, x: &Word, y: &Word) -> Result<Path, ThickError> {
        let down = self.oriented(x, &self.sink)?;
        let up = self.v.reversed();
        let again = self.oriented(&self.source, y)?;
        Ok(down.then(&up)?.then(&again)?)
    }

    /// The path `x ↗ s ↓ t ↗ y`.
    pub fn psi_path(&self, x: &Word, y: &Word) -> Result<Path, ThickError> {
        let up = self.oriented(&self.source, x)?.reversed();
        let back = self.oriented(y, &self.sink)?.reversed();
        Ok(up.then(&self.v)?.then(&back)?)
    }

    /// `φ_{x,y}: B_x → B_y`.
    pub fn transition(&self, x: &Word, y: &Word) -> Result<Arc<BSMorphism>, ThickError> {
        let key = (x.clone(), y.clone());
        if let Some(hit) = self.transitions.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let m = Arc::new(path_morphism(&self.phi_path(x, y)?)?);
        self.transitions.lock().unwrap().insert(key, m.clone());
        Ok(m)
    }

    pub fn psi(&self, x: &Word, y: &Word) -> Result<BSMorphism, ThickError> {
        path_morphism(&self.psi_path(x, y)?)
    }

    /// `z z̄ z = z` and `z̄ z z̄ = z̄`.
    pub fn check_idempotent(&self) -> Result<Vec<CheckReport>, ThickError> {
        let zzz = path_diagram(&self.v).eval_after(&self.zbar.after(&self.z)?)?;
        let zbar3 = path_diagram(&self.v.reversed()).eval_after(&self.z.after(&self.zbar)?)?;
        let params = json!({ "J": self.parabolic.indices() });
        Ok(vec![
            CheckReport::new("z zbar z = z", params.clone(), zzz == self.z),
            CheckReport::new("zbar z zbar = zbar", params, zbar3 == self.zbar),
        ])
    }

    /// `φ_{y,w} ∘ φ_{x,y} = φ_{x,w}`, computed literally.
    pub fn check_triple(&self, x: &Word, y: &Word, w: &Word) -> Result<bool, ThickError> {
        let first = self.transition(x, y)?;
        let both = path_diagram(&self.phi_path(y, w)?).eval_after(&first)?;
        Ok(both == *self.transition(x, w)?)
    }

    /// `φ_{x,x}` is idempotent.
    pub fn check_idempotent_at(&self, x: &Word) -> Result<bool, ThickError> {
        let p = self.transition(x, x)?;
        Ok(path_diagram(&self.phi_path(x, x)?).eval_after(&p)? == *p)
    }

    /// `φ_{x,y} = ψ_{x,y}`.
    pub fn check_phi_psi(&self, x: &Word, y: &Word) -> Result<bool, ThickError> {
        Ok(*self.transition(x, y)? == self.psi(x, y)?)
    }

    /// `φ_{x,y}` sends the 1-tensor to the 1-tensor.
    pub fn check_one_tensor(&self, x: &Word, y: &Word) -> Result<bool, ThickError> {
        let mut one = Coords::new();
        one.insert(0, MultiPoly::one());
        Ok(*self.transition(x, y)?.column(0) == one)
    }

    /// The three corollaries about up-down paths along `V_J`, at every vertex of `V_J`.
    pub fn check_up_down(&self) -> Result<Vec<CheckReport>, ThickError> {
        let mut out = Vec::new();
        let total = self.v.moves().len();
        let j = self.parabolic.indices().to_vec();
        let prefix = |k: usize| path_diagram(&sub_path(&self.v, 0, k));
        let suffix = |k: usize| path_diagram(&sub_path(&self.v, k, total));
        let suffix_up = |k: usize| path_diagram(&sub_path(&self.v, k, total).reversed());
        for step in self.v_steps() {
            // t ↗ s ↓ x  versus  t ↗ s ↓ y ↾ x
            let lhs = prefix(step.index).eval_after(&self.zbar)?;
            let back = path_diagram(&sub_path(&self.v, step.index, step.index + 1).reversed());
            let rhs = back.eval_after(&prefix(step.index + 1).eval_after(&self.zbar)?)?;
            out.push(CheckReport::new(
                "up-down: doubled vertex after zbar",
                json!({ "J": j, "x": step.before.to_string() }),
                lhs == rhs,
            ));
        }
        let mut cuts: Vec<usize> = self.v_steps().iter().map(|s| s.index).collect();
        cuts.push(total);
        for k in cuts {
            let x = self.v.words()[k].to_string();
            let down_x = prefix(k);
            let up_x = down_x.vflip()?;
            let a = up_x.eval_after(&down_x.eval_after(&self.zbar)?)?;
            out.push(CheckReport::new("t↗s↓x↗s = t↗s", json!({ "J": j, "x": x }), a == self.zbar));
            let b = suffix(k).eval_after(&suffix_up(k).eval_after(&self.z)?)?;
            out.push(CheckReport::new("s↓t↗x↓t = s↓t", json!({ "J": j, "x": x }), b == self.z));
            let c = down_x.eval_after(&self.zbar.after(&self.z)?)?;
            let d = suffix_up(k).eval_after(&self.z)?;
            out.push(CheckReport::new("s↓t↗s↓x = s↓t↗x", json!({ "J": j, "x": x }), c == d));
        }
        Ok(out)
    }

    /// Consistency on every `V_J` triple, on `samples` random triples of classes, and
    /// idempotency plus 1-tensor transport at every class.
    pub fn check_consistency(&self, samples: usize, seed: u64) -> Result<Vec<CheckReport>, ThickError> {
        let j = self.parabolic.indices().to_vec();
        let mut out = Vec::new();
        let v = self.v_vertices();
        let mut all_v = true;
        let mut failed = Vec::new();
        for x in &v {
            for y in &v {
                for w in &v {
                    if !self.check_triple(x, y, w)? {
                        all_v = false;
                        failed.push(json!([x.to_string(), y.to_string(), w.to_string()]));
                    }
                }
            }
        }
        let mut r = CheckReport::new("phi consistency on V_J triples", json!({ "J": j, "vertices": v.len() }), all_v);
        if !all_v {
            r = r.with_witness(json!(failed));
        }
        out.push(r);

        let classes = self.classes();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ok = true;
        let mut failed = Vec::new();
        for _ in 0..samples {
            let pick = |rng: &mut ChaCha8Rng| classes[rng.gen_range(0..classes.len())].clone();
            let (x, y, w) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            if !self.check_triple(&x, &y, &w)? {
                ok = false;
                failed.push(json!([x.to_string(), y.to_string(), w.to_string()]));
            }
        }
        let mut r = CheckReport::new("phi consistency on random triples", json!({ "J": j, "samples": samples, "seed": seed }), ok);
        if !ok {
            r = r.with_witness(json!(failed));
        }
        out.push(r);

        for x in &classes {
            let params = json!({ "J": j, "x": x.to_string() });
            out.push(CheckReport::new("phi_xx idempotent", params.clone(), self.check_idempotent_at(x)?));
            out.push(CheckReport::new("phi sends 1-tensor to 1-tensor", params, self.check_one_tensor(x, &self.source)?));
        }
        Ok(out)
    }
}

/// A rank over the fraction field estimated by evaluation at random integer points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankEstimate {
    pub trials: Vec<usize>,
    pub rank: usize,
    /// Number of trials attaining the maximum.
    pub agreeing: usize,
}

/// Rank of `m` over the fraction field of the polynomial ring: the maximum over `trials`
/// evaluations at points drawn from a seeded generator.
pub fn random_rank(m: &BSMorphism, nvars: usize, trials: usize, seed: u64) -> RankEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ranks: Vec<usize> = (0..trials)
        .map(|_| {
            let point: Vec<Coeff> = (0..nvars).map(|_| Coeff::from_integer(rng.gen_range(-97i64..=97).into())).collect();
            dense_rank(&m.evaluate(&point))
        })
        .collect();
    let rank = ranks.iter().copied().max().unwrap_or(0);
    let agreeing = ranks.iter().filter(|&&r| r == rank).count();
    RankEstimate { trials: ranks, rank, agreeing }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bsmod::six_valent;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn small_z() {
        let j1 = Parabolic::new([1]);
        assert_eq!(z(&j1).unwrap(), BSMorphism::identity(w("1")));
        let j12 = Parabolic::interval(1, 2);
        assert_eq!(z(&j12).unwrap(), *six_valent(1, 2).unwrap());
        assert_eq!(zbar(&j12).unwrap(), *six_valent(2, 1).unwrap());
    }

    #[test]
    fn two_colour_family() {
        let fam = ProjectorFamily::new(&Parabolic::interval(1, 2)).unwrap();
        assert!(fam.check_idempotent().unwrap().iter().all(CheckReport::passed));
        let doubled = six_valent(2, 1).unwrap().after(&six_valent(1, 2).unwrap()).unwrap();
        assert_eq!(*fam.transition(&w("121"), &w("121")).unwrap(), doubled);
        assert_eq!(*fam.transition(&w("212"), &w("121")).unwrap(), fam.zbar().clone());
        assert!(fam.check_consistency(5, 1).unwrap().iter().all(CheckReport::passed));
        assert!(fam.check_up_down().unwrap().iter().all(CheckReport::passed));
        let r = random_rank(&fam.transition(&w("121"), &w("121")).unwrap(), 2, 3, 7);
        assert_eq!((r.rank, r.agreeing), (6, 3));
    }

    #[test]
    fn distant_loop_is_identity() {
        let mut p = Path::empty(w("13"));
        p.push(0, EdgeKind::Distant).unwrap();
        p.push(0, EdgeKind::Distant).unwrap();
        assert_eq!(path_morphism(&p).unwrap(), BSMorphism::identity(w("13")));
        assert_eq!(path_morphism(&Path::empty(w("1"))).unwrap(), BSMorphism::identity(w("1")));
    }
}
