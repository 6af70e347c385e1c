//! The defining relations of the diagrammatic category, instantiated on concrete colours and
//! checked as identities of bimodule maps.

use super::diagram::{path_diagram, six_side_maps, Diagram, Gen};
use super::morphism::BSMorphism;
use super::BsError;
use crate::coxeter::{Parabolic, Word};
use crate::exprgraph::{EdgeKind, ParabolicGraph, Path};
use crate::poly_core::{coeff, demazure, ratio, reflect, Coeff, MultiPoly};

/// `lhs = rhs` between diagrams with common boundary.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: &'static str,
    pub colours: Vec<u8>,
    pub lhs: Diagram,
    pub rhs: Diagram,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: &'static str,
    pub colours: Vec<u8>,
    pub holds: bool,
    pub bimodule: bool,
}

impl Relation {
    fn new(name: &'static str, colours: &[u8], lhs: impl Into<Diagram>, rhs: impl Into<Diagram>) -> Self {
        Relation { name, colours: colours.to_vec(), lhs: lhs.into(), rhs: rhs.into() }
    }

    fn vanishing(name: &'static str, colours: &[u8], lhs: impl Into<Diagram>) -> Self {
        let lhs = lhs.into();
        let rhs = Diagram::Sum(vec![(coeff(0), lhs.clone())]);
        Relation { name, colours: colours.to_vec(), lhs, rhs }
    }

    pub fn check(&self, nvars: usize) -> Result<RelationCheck, BsError> {
        let l = self.lhs.eval()?;
        let r = self.rhs.eval()?;
        let bimodule = l.check_degree().is_ok()
            && r.check_degree().is_ok()
            && l.is_bimodule_map(nvars)
            && r.is_bimodule_map(nvars);
        Ok(RelationCheck { name: self.name, colours: self.colours.clone(), holds: l == r, bimodule })
    }
}

fn w(letters: &[u8]) -> Word {
    Word::new(letters.to_vec())
}

fn g(gen: Gen) -> Diagram {
    Diagram::Gen(gen)
}

fn layer(prefix: &[u8], gen: impl Into<Diagram>, suffix: &[u8]) -> Diagram {
    Diagram::layer(&w(prefix), gen, &w(suffix))
}

fn combo(terms: Vec<(Coeff, Diagram)>) -> Diagram {
    Diagram::Sum(terms)
}

fn broken(i: u8) -> Diagram {
    g(Gen::Counit(i)).then(Gen::Unit(i))
}

/// `f` on the left of strand `i` equals `s_i f` on the right plus `∂_i f` times the broken strand.
fn polynomial_forcing(name: &'static str, colours: &[u8], i: u8, f: MultiPoly) -> Relation {
    let wi = w(&[i]);
    let lhs = Diagram::poly_left(f.clone(), &wi);
    let sf = reflect(i as usize, &f).expect("valid colour");
    let df = demazure(i as usize, &f).expect("valid colour");
    let rhs = combo(vec![
        (coeff(1), Diagram::poly_right(&wi, sf)),
        (coeff(1), broken(i).then(Diagram::poly_left(df, &wi))),
    ]);
    Relation::new(name, colours, lhs, rhs)
}

fn one_colour(i: u8, n: u8) -> Vec<Relation> {
    let c = [i];
    let mut out = vec![
        Relation::new(
            "assoc1",
            &c,
            layer(&[], Gen::Merge(i), &[i]).then(Gen::Merge(i)),
            layer(&[i], Gen::Merge(i), &[]).then(Gen::Merge(i)),
        ),
        Relation::new(
            "assoc1",
            &c,
            g(Gen::Split(i)).then(layer(&[], Gen::Split(i), &[i])),
            g(Gen::Split(i)).then(layer(&[i], Gen::Split(i), &[])),
        ),
        Relation::new(
            "assoc1",
            &c,
            layer(&[], Gen::Split(i), &[i]).then(layer(&[i], Gen::Merge(i), &[])),
            g(Gen::Merge(i)).then(Gen::Split(i)),
        ),
        Relation::new("unit", &c, layer(&[], Gen::Unit(i), &[i]).then(Gen::Merge(i)), Diagram::id(&w(&c))),
        Relation::new("unit", &c, layer(&[i], Gen::Unit(i), &[]).then(Gen::Merge(i)), Diagram::id(&w(&c))),
        Relation::new("unit", &c, g(Gen::Split(i)).then(layer(&[], Gen::Counit(i), &[i])), Diagram::id(&w(&c))),
        Relation::new("unit", &c, g(Gen::Split(i)).then(layer(&[i], Gen::Counit(i), &[])), Diagram::id(&w(&c))),
        Relation::vanishing("needle", &c, g(Gen::Split(i)).then(Gen::Merge(i))),
    ];
    let mut polys = vec![MultiPoly::var(i as usize), MultiPoly::var(i as usize).pow(2)];
    for k in [i.saturating_sub(1), i + 1] {
        if k >= 1 && k <= n {
            polys.push(MultiPoly::var(k as usize));
            polys.push(&MultiPoly::var(k as usize) * &MultiPoly::var(i as usize));
        }
    }
    for f in polys {
        out.push(polynomial_forcing("dotslidesame", &c, i, f));
    }
    let ii = w(&[i, i]);
    let mid = || layer(&[i], Gen::Poly(MultiPoly::var(i as usize)), &[i]);
    let h = || g(Gen::Merge(i)).then(Gen::Split(i));
    out.push(Relation::new(
        "iidecomp",
        &c,
        Diagram::id(&ii),
        combo(vec![(ratio(1, 2), mid().then(h())), (ratio(1, 2), h().then(mid()))]),
    ));
    out
}

fn distant_pair(i: u8, j: u8) -> Vec<Relation> {
    let c = [i, j];
    let (fi, fj) = (MultiPoly::var(i as usize), MultiPoly::var(j as usize));
    vec![
        Relation::new("R2", &c, g(Gen::Cross(i, j)).then(Gen::Cross(j, i)), Diagram::id(&w(&c))),
        Relation::new(
            "distslidedot",
            &c,
            g(Gen::Cross(i, j)).then(layer(&[], Gen::Counit(j), &[i])),
            layer(&[i], Gen::Counit(j), &[]),
        ),
        Relation::new(
            "distslidedot",
            &c,
            layer(&[i], Gen::Unit(j), &[]).then(Gen::Cross(i, j)),
            layer(&[], Gen::Unit(j), &[i]),
        ),
        Relation::new(
            "distslide3",
            &c,
            g(Gen::Cross(i, j)).then(layer(&[j], Gen::Split(i), &[])),
            layer(&[], Gen::Split(i), &[j])
                .then(layer(&[i], Gen::Cross(i, j), &[]))
                .then(layer(&[], Gen::Cross(i, j), &[i])),
        ),
        Relation::new(
            "distslide3",
            &c,
            layer(&[i], Gen::Merge(j), &[]).then(Gen::Cross(i, j)),
            layer(&[], Gen::Cross(i, j), &[j])
                .then(layer(&[j], Gen::Cross(i, j), &[]))
                .then(layer(&[], Gen::Merge(j), &[i])),
        ),
        Relation::new("dotslidefar", &c, Diagram::poly_left(fi.clone(), &w(&[j])), Diagram::poly_right(&w(&[j]), fi)),
        Relation::new("dotslidefar", &c, Diagram::poly_left(fj.clone(), &w(&[i])), Diagram::poly_right(&w(&[i]), fj)),
    ]
}

/// `k` passes a 6-valent vertex of colours `i, j` (both distant from `k`).
fn distslide6(i: u8, j: u8, k: u8) -> Relation {
    let lhs = layer(&[], Gen::Cross(k, i), &[j, i])
        .then(layer(&[i], Gen::Cross(k, j), &[i]))
        .then(layer(&[i, j], Gen::Cross(k, i), &[]))
        .then(layer(&[], Gen::Six(i, j), &[k]));
    let rhs = layer(&[k], Gen::Six(i, j), &[])
        .then(layer(&[], Gen::Cross(k, j), &[i, j]))
        .then(layer(&[j], Gen::Cross(k, i), &[j]))
        .then(layer(&[j, i], Gen::Cross(k, j), &[]));
    Relation::new("distslide6", &[i, j, k], lhs, rhs)
}

/// Three mutually distant colours: the two ways of reversing `i j k`.
fn distslide4(i: u8, j: u8, k: u8) -> Relation {
    let lhs = layer(&[], Gen::Cross(i, j), &[k])
        .then(layer(&[j], Gen::Cross(i, k), &[]))
        .then(layer(&[], Gen::Cross(j, k), &[i]));
    let rhs = layer(&[i], Gen::Cross(j, k), &[])
        .then(layer(&[], Gen::Cross(i, k), &[j]))
        .then(layer(&[k], Gen::Cross(i, j), &[]));
    Relation::new("distslide4", &[i, j, k], lhs, rhs)
}

/// Colour pair `i, j` adjacent; `j` plays the middle strand of `i j i`.
fn adjacent_pair(i: u8, j: u8) -> Vec<Relation> {
    let c = [i, j];
    let iji = w(&[i, j, i]);
    let (pi, iota) = six_side_maps(i, j);
    let six = |a: u8, b: u8| g(Gen::Six(a, b));
    let dot6 = Relation::new(
        "dot6",
        &c,
        six(i, j).then(layer(&[j], Gen::Counit(i), &[j])),
        combo(vec![
            (coeff(1), Diagram::Tensor(vec![g(Gen::Counit(i)), g(Gen::Split(j)), g(Gen::Counit(i))])),
            (
                coeff(1),
                pi.clone().then(Gen::Counit(i)).then(Gen::Unit(j)).then(Gen::Split(j)),
            ),
        ]),
    );
    let ipidecomp = Relation::new(
        "ipidecomp",
        &c,
        Diagram::id(&iji),
        combo(vec![(coeff(1), six(i, j).then(six(j, i))), (coeff(-1), pi.clone().then(iota.clone()))]),
    );
    let assoc2 = Relation::new(
        "assoc2",
        &c,
        layer(&[], Gen::Merge(i), &[j, i]).then(six(i, j)),
        layer(&[i], Gen::Six(i, j), &[])
            .then(layer(&[], Gen::Six(i, j), &[j]))
            .then(layer(&[j, i], Gen::Merge(j), &[])),
    );
    let assoc2_mirror = Relation::new(
        "assoc2",
        &c,
        layer(&[i, j], Gen::Merge(i), &[]).then(six(i, j)),
        layer(&[], Gen::Six(i, j), &[i])
            .then(layer(&[j], Gen::Six(i, j), &[]))
            .then(layer(&[], Gen::Merge(j), &[i, j])),
    );
    let doubled = six(i, j).then(six(j, i));
    let double_partial = Relation::new(
        "doubleasspartial",
        &c,
        layer(&[], Gen::Merge(i), &[j, i]).then(doubled),
        layer(&[i], Gen::Six(i, j), &[])
            .then(layer(&[], Gen::Six(i, j), &[j]))
            .then(layer(&[], Gen::Six(j, i), &[j]))
            .then(layer(&[i], Gen::Six(j, i), &[]))
            .then(layer(&[], Gen::Merge(i), &[j, i])),
    );
    let fi = MultiPoly::var(i as usize);
    let dotslidenear = polynomial_forcing("dotslidenear", &c, j, fi);
    let dot6inside = Relation::vanishing("dot6inside", &c, six(j, i).then(pi));
    vec![dot6, ipidecomp, assoc2, assoc2_mirror, dotslidenear, double_partial, dot6inside]
}

/// All simple paths between two classes of the conflated graph, optionally only along the
/// orientation.
fn class_paths(graph: &ParabolicGraph, from: usize, to: usize, oriented: bool) -> Vec<Vec<usize>> {
    fn dfs(
        graph: &ParabolicGraph,
        cur: usize,
        to: usize,
        oriented: bool,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur == to {
            out.push(stack.clone());
            return;
        }
        for &(a, b) in &graph.conflated.edges {
            let next = if a == cur {
                b
            } else if b == cur && !oriented {
                a
            } else {
                continue;
            };
            if stack.contains(&next) {
                continue;
            }
            stack.push(next);
            dfs(graph, next, to, oriented, stack, out);
            stack.pop();
        }
    }
    let mut out = Vec::new();
    dfs(graph, from, to, oriented, &mut vec![from], &mut out);
    out
}

/// Turn a walk between classes into a path between two given words, inserting commutations.
fn realize(graph: &ParabolicGraph, classes: &[usize], start: &Word, end: &Word) -> Result<Path, BsError> {
    let fail = |e: crate::exprgraph::GraphError| BsError::Solve(e.to_string());
    let g = &graph.expanded;
    let mut path = Path::empty(start.clone());
    for step in classes.windows(2) {
        let edge = g
            .edges()
            .iter()
            .find(|e| {
                e.kind == EdgeKind::Adjacent && {
                    let (cu, cv) = (graph.conflated.class_of[e.u], graph.conflated.class_of[e.v]);
                    (cu, cv) == (step[0], step[1]) || (cv, cu) == (step[0], step[1])
                }
            })
            .ok_or_else(|| BsError::Solve("classes are not adjacent".into()))?;
        let from = if graph.conflated.class_of[edge.u] == step[0] { edge.u } else { edge.v };
        path.commute_to(&g.vertices()[from]).map_err(fail)?;
        path.push(edge.pos, EdgeKind::Adjacent).map_err(fail)?;
    }
    path.commute_to(end).map_err(fail)?;
    Ok(path)
}

/// The two oriented paths around the Zamolodchikov cycle of `{a, a+1, a+2}`.
pub fn zamolodchikov_paths(a: u8) -> Result<(Path, Path), BsError> {
    let parabolic = Parabolic::interval(a as usize, a as usize + 2);
    let graph = ParabolicGraph::build(&parabolic).map_err(|e| BsError::Solve(e.to_string()))?;
    let start = graph.conflated.representatives[graph.source].clone();
    let end = graph.conflated.representatives[graph.sink].clone();
    let walks = class_paths(&graph, graph.source, graph.sink, true);
    if walks.len() != 2 {
        return Err(BsError::Solve(format!("expected 2 oriented walks, found {}", walks.len())));
    }
    Ok((realize(&graph, &walks[0], &start, &end)?, realize(&graph, &walks[1], &start, &end)?))
}

fn zamolodchikov(a: u8) -> Result<Vec<Relation>, BsError> {
    let (p, q) = zamolodchikov_paths(a)?;
    let (dp, dq) = (path_diagram(&p), path_diagram(&q));
    let colours = [a, a + 1, a + 2];
    Ok(vec![
        Relation::new("assoc3", &colours, dp.clone(), dq.clone()),
        Relation::new("assoc3", &colours, dp.vflip()?, dq.vflip()?),
    ])
}

/// Every relation for every applicable colour pattern among `1..=n`.
pub fn relation_suite(n: u8) -> Result<Vec<Relation>, BsError> {
    let mut out = Vec::new();
    for i in 1..=n {
        out.extend(one_colour(i, n));
    }
    for i in 1..=n {
        for j in 1..=n {
            if i.abs_diff(j) >= 2 {
                out.extend(distant_pair(i, j));
            }
            if i.abs_diff(j) == 1 {
                out.extend(adjacent_pair(i, j));
            }
        }
    }
    for i in 1..n {
        let j = i + 1;
        for k in 1..=n {
            if k.abs_diff(i) >= 2 && k.abs_diff(j) >= 2 {
                out.push(distslide6(i, j, k));
                out.push(distslide6(j, i, k));
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i.abs_diff(j) >= 2 && j.abs_diff(k) >= 2 && i.abs_diff(k) >= 2 {
                    out.push(distslide4(i, j, k));
                }
            }
        }
    }
    for a in 1..=n.saturating_sub(2) {
        out.extend(zamolodchikov(a)?);
    }
    Ok(out)
}

/// Evidence that orientation matters: the two unoriented path morphisms between two vertices
/// of the Zamolodchikov cycle, each followed by an aborted 6-valent vertex.
#[derive(Clone, Debug)]
pub struct OrientationWitness {
    pub paths: (Path, Path),
    pub morphisms: (BSMorphism, BSMorphism),
    pub aborted: (BSMorphism, BSMorphism),
}

impl OrientationWitness {
    pub fn morphisms_differ(&self) -> bool {
        self.morphisms.0 != self.morphisms.1
    }
}

pub fn orientation_witness(from: &Word, to: &Word) -> Result<OrientationWitness, BsError> {
    let rank = from.max_letter().max(to.max_letter());
    let parabolic = Parabolic::interval(1, rank);
    let graph = ParabolicGraph::build(&parabolic).map_err(|e| BsError::Solve(e.to_string()))?;
    let (cf, ct) = match (graph.class_of_word(from), graph.class_of_word(to)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(BsError::Solve(format!("{from} or {to} is not a reduced word of the longest element"))),
    };
    let walks = class_paths(&graph, cf, ct, false);
    if walks.len() != 2 {
        return Err(BsError::Solve(format!("expected 2 walks, found {}", walks.len())));
    }
    let p = realize(&graph, &walks[0], from, to)?;
    let q = realize(&graph, &walks[1], from, to)?;
    let (mp, mq) = (path_diagram(&p).eval()?, path_diagram(&q).eval()?);
    // Abort at the last braid triple `a b a` of the target.
    let l = to.letters();
    let pos = (0..l.len().saturating_sub(2))
        .rev()
        .find(|&k| l[k] == l[k + 2] && l[k].abs_diff(l[k + 1]) == 1)
        .ok_or_else(|| BsError::Solve("target has no braid triple".into()))?;
    let (pi, _) = six_side_maps(l[pos], l[pos + 1]);
    let abort = Diagram::layer(&to.slice(0, pos), pi, &to.slice(pos + 3, to.len()));
    let (ap, aq) = (abort.eval_after(&mp)?, abort.eval_after(&mq)?);
    Ok(OrientationWitness { paths: (p, q), morphisms: (mp, mq), aborted: (ap, aq) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_and_two_colour_relations_hold() {
        for r in relation_suite(3).unwrap() {
            let c = r.check(3).unwrap();
            assert!(c.holds, "{} {:?}", c.name, c.colours);
            assert!(c.bimodule, "{} {:?}", c.name, c.colours);
        }
    }

    #[test]
    fn distslide4_needs_five_colours() {
        let r = distslide4(1, 3, 5);
        assert!(r.check(5).unwrap().holds);
    }

    #[test]
    fn orientation_matters() {
        let wit = orientation_witness(&"212321".parse().unwrap(), &"321232".parse().unwrap()).unwrap();
        assert!(!wit.paths.0.is_oriented() && !wit.paths.0.is_reverse_oriented());
        assert!(!wit.paths.1.is_oriented() && !wit.paths.1.is_reverse_oriented());
        assert!(wit.morphisms_differ());
        assert!(wit.aborted.0.is_zero() != wit.aborted.1.is_zero());
    }
}
