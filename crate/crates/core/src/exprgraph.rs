//! Expression graphs of reduced words: braid and commutation moves, the conflated graph with
//! its orientation, canonical source/sink words and the named path families built on them.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde_json::{json, Value};
use thiserror::Error;

use crate::coxeter::{eval, longest, reduced_words, CoxeterError, Parabolic, Perm, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("no {kind} move at position {pos} of {word}")]
    BadMove { word: String, pos: usize, kind: EdgeKind },
    #[error("{from} and {to} are not related by commutation moves")]
    NotCommutable { from: String, to: String },
    #[error("expected a unique source and sink, found {sources} sources and {sinks} sinks")]
    NotUnique { sources: usize, sinks: usize },
    #[error("index {index} is not in {parabolic}")]
    IndexNotInParabolic { index: usize, parabolic: String },
    #[error("no path found from {from} to {to}")]
    NoPath { from: String, to: String },
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    /// `i j i ↔ j i j` with `|i - j| = 1`.
    Adjacent,
    /// `i j ↔ j i` with `|i - j| ≥ 2`.
    Distant,
}

impl std::fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EdgeKind::Adjacent => "adjacent",
            EdgeKind::Distant => "distant",
        })
    }
}

/// Which move, if any, applies at `pos`.
pub fn move_kind_at(letters: &[u8], pos: usize) -> Option<EdgeKind> {
    let a = *letters.get(pos)?;
    let b = *letters.get(pos + 1)?;
    if a.abs_diff(b) >= 2 {
        return Some(EdgeKind::Distant);
    }
    if a.abs_diff(b) == 1 && letters.get(pos + 2) == Some(&a) {
        return Some(EdgeKind::Adjacent);
    }
    None
}

/// Apply a move in place; panics are avoided by validating first.
pub fn apply_move(word: &Word, pos: usize, kind: EdgeKind) -> Result<Word, GraphError> {
    let l = word.letters();
    if move_kind_at(l, pos) != Some(kind) {
        return Err(GraphError::BadMove { word: word.to_string(), pos, kind });
    }
    let mut v = l.to_vec();
    match kind {
        EdgeKind::Distant => v.swap(pos, pos + 1),
        EdgeKind::Adjacent => {
            let (a, b) = (v[pos], v[pos + 1]);
            v[pos] = b;
            v[pos + 1] = a;
            v[pos + 2] = b;
        }
    }
    Ok(Word::new(v))
}

/// Whether the adjacent move at `pos` follows the orientation `i, i+1, i → i+1, i, i+1`.
pub fn is_oriented_move(letters: &[u8], pos: usize) -> bool {
    letters[pos + 1] == letters[pos] + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub pos: usize,
    pub kind: EdgeKind,
}

/// A walk in the expanded graph: a start word and a sequence of moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    start: Word,
    moves: Vec<Move>,
    end: Word,
}

impl Path {
    pub fn empty(start: Word) -> Self {
        Path { end: start.clone(), start, moves: Vec::new() }
    }

    pub fn start(&self) -> &Word {
        &self.start
    }

    pub fn end(&self) -> &Word {
        &self.end
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn push(&mut self, pos: usize, kind: EdgeKind) -> Result<(), GraphError> {
        self.end = apply_move(&self.end, pos, kind)?;
        self.moves.push(Move { pos, kind });
        Ok(())
    }

    /// All words visited, starting with `start`.
    pub fn words(&self) -> Vec<Word> {
        let mut out = vec![self.start.clone()];
        let mut cur = self.start.clone();
        for m in &self.moves {
            cur = apply_move(&cur, m.pos, m.kind).expect("path moves were validated");
            out.push(cur.clone());
        }
        out
    }

    /// Path length counts only braid moves.
    pub fn adjacent_len(&self) -> usize {
        self.moves.iter().filter(|m| m.kind == EdgeKind::Adjacent).count()
    }

    /// Whether every braid move goes with the orientation.
    pub fn is_oriented(&self) -> bool {
        self.words()
            .iter()
            .zip(&self.moves)
            .all(|(w, m)| m.kind == EdgeKind::Distant || is_oriented_move(w.letters(), m.pos))
    }

    /// Whether every braid move goes against the orientation.
    pub fn is_reverse_oriented(&self) -> bool {
        self.reversed().is_oriented()
    }

    pub fn reversed(&self) -> Path {
        Path {
            start: self.end.clone(),
            end: self.start.clone(),
            moves: self.moves.iter().rev().copied().collect(),
        }
    }

    /// Concatenate; `other` must start where `self` ends.
    pub fn then(&self, other: &Path) -> Result<Path, GraphError> {
        if other.start != self.end {
            return Err(GraphError::NoPath { from: self.end.to_string(), to: other.start.to_string() });
        }
        let mut moves = self.moves.clone();
        moves.extend_from_slice(&other.moves);
        Ok(Path { start: self.start.clone(), moves, end: other.end.clone() })
    }

    /// The same moves performed inside `prefix · word · suffix`.
    pub fn embed(&self, prefix: &Word, suffix: &Word) -> Path {
        let off = prefix.len();
        Path {
            start: prefix.concat(&self.start).concat(suffix),
            end: prefix.concat(&self.end).concat(suffix),
            moves: self.moves.iter().map(|m| Move { pos: m.pos + off, kind: m.kind }).collect(),
        }
    }

    /// Apply a letter relabelling that preserves distances (e.g. the diagram flip).
    pub fn relabel(&self, f: impl Fn(u8) -> u8 + Copy) -> Path {
        Path { start: self.start.relabel(f), end: self.end.relabel(f), moves: self.moves.clone() }
    }

    /// Append moves turning the current end into `target` using only commutations.
    pub fn commute_to(&mut self, target: &Word) -> Result<(), GraphError> {
        let p = commutation_path(&self.end, target)?;
        self.moves.extend_from_slice(&p.moves);
        self.end = p.end;
        Ok(())
    }
}

/// A commutation-only path between two words of the same commutation class.
pub fn commutation_path(from: &Word, to: &Word) -> Result<Path, GraphError> {
    let err = || GraphError::NotCommutable { from: from.to_string(), to: to.to_string() };
    if from.len() != to.len() {
        return Err(err());
    }
    let mut path = Path::empty(from.clone());
    let target = to.letters();
    for k in 0..target.len() {
        let cur = path.end.letters().to_vec();
        let m = (k..cur.len()).find(|&m| cur[m] == target[k]).ok_or_else(err)?;
        for pos in (k..m).rev() {
            path.push(pos, EdgeKind::Distant).map_err(|_| err())?;
        }
    }
    Ok(path)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
    pub pos: usize,
}

/// All reduced words of an element, with braid and commutation moves as edges.
#[derive(Debug, Clone)]
pub struct ExpandedGraph {
    element: Perm,
    vertices: Vec<Word>,
    index: HashMap<Word, usize>,
    edges: Vec<Edge>,
}

impl ExpandedGraph {
    pub fn element(&self) -> &Perm {
        &self.element
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Neighbours of vertex `u` as `(v, move)`.
    pub fn neighbours(&self, u: usize) -> Vec<(usize, Move)> {
        let w = &self.vertices[u];
        let l = w.letters();
        (0..l.len())
            .filter_map(|pos| {
                let kind = move_kind_at(l, pos)?;
                let next = apply_move(w, pos, kind).ok()?;
                Some((self.index[&next], Move { pos, kind }))
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for (v, _) in self.neighbours(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.vertices.len()
    }

    /// DOT rendering: braid edges solid and directed, commutation edges dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph expanded {\n");
        for (k, w) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{} [label=\"{}\"];", k, w);
        }
        for e in &self.edges {
            match e.kind {
                EdgeKind::Adjacent => {
                    let (a, b) = self.oriented_ends(e);
                    let _ = writeln!(s, "  v{} -> v{};", a, b);
                }
                EdgeKind::Distant => {
                    let _ = writeln!(s, "  v{} -> v{} [style=dashed, dir=none];", e.u, e.v);
                }
            }
        }
        s.push_str("}\n");
        s
    }

    /// `(from, to)` of a braid edge following the orientation.
    pub fn oriented_ends(&self, e: &Edge) -> (usize, usize) {
        if is_oriented_move(self.vertices[e.u].letters(), e.pos) {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| {
                let (u, v) = if e.kind == EdgeKind::Adjacent { self.oriented_ends(e) } else { (e.u, e.v) };
                json!({"u": self.vertices[u].to_string(), "v": self.vertices[v].to_string(), "kind": e.kind.to_string(), "pos": e.pos})
            }).collect::<Vec<_>>(),
        })
    }
}

/// The expanded expression graph of `w`.
pub fn build_expanded(w: &Perm) -> ExpandedGraph {
    let vertices = reduced_words(w);
    let index: HashMap<Word, usize> = vertices.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
    let mut edges = Vec::new();
    for (u, word) in vertices.iter().enumerate() {
        let l = word.letters();
        for pos in 0..l.len() {
            if let Some(kind) = move_kind_at(l, pos) {
                let next = apply_move(word, pos, kind).expect("move validated");
                let v = index[&next];
                if u < v {
                    edges.push(Edge { u, v, kind, pos });
                }
            }
        }
    }
    ExpandedGraph { element: w.clone(), vertices, index, edges }
}

/// The expanded graph of the element represented by a (reduced) word.
pub fn build_expanded_from_word(word: &Word) -> Result<ExpandedGraph, GraphError> {
    let rank = word.max_letter().max(1);
    Ok(build_expanded(&eval(word, rank)?))
}

/// The quotient by commutation moves, with oriented braid edges between classes.
#[derive(Debug, Clone)]
pub struct ConflatedGraph {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Lexicographically least word of each class.
    pub representatives: Vec<Word>,
    /// Oriented edges `(from, to)` between classes.
    pub edges: BTreeSet<(usize, usize)>,
}

impl ConflatedGraph {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.len()).filter(|&c| !self.edges.iter().any(|&(_, b)| b == c)).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.len()).filter(|&c| !self.edges.iter().any(|&(a, _)| a == c)).collect()
    }

    pub fn to_dot(&self, g: &ExpandedGraph) -> String {
        let _ = g;
        let mut s = String::from("digraph conflated {\n");
        let sources = self.sources();
        let sinks = self.sinks();
        for (k, w) in self.representatives.iter().enumerate() {
            let mark = if sources.contains(&k) {
                ", shape=box"
            } else if sinks.contains(&k) {
                ", shape=doublecircle"
            } else {
                ""
            };
            let _ = writeln!(s, "  c{} [label=\"{}\"{}];", k, w, mark);
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "  c{} -> c{};", a, b);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> Value {
        let sources = self.sources();
        let sinks = self.sinks();
        json!({
            "vertices": self.representatives.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|&(a, b)| json!({
                "u": self.representatives[a].to_string(),
                "v": self.representatives[b].to_string(),
                "kind": "adjacent",
                "pos": Value::Null,
            })).collect::<Vec<_>>(),
            "source": if sources.len() == 1 { json!(self.representatives[sources[0]].to_string()) } else { Value::Null },
            "sink": if sinks.len() == 1 { json!(self.representatives[sinks[0]].to_string()) } else { Value::Null },
        })
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

pub fn conflate(g: &ExpandedGraph) -> ConflatedGraph {
    let n = g.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for e in g.edges.iter().filter(|e| e.kind == EdgeKind::Distant) {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    // Vertices are sorted, so the first member of each class is its least word.
    let mut root_to_class: BTreeMap<usize, usize> = BTreeMap::new();
    let mut class_of = vec![0; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        let c = *root_to_class.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        class_of[v] = c;
        classes[c].push(v);
    }
    let representatives = classes.iter().map(|c| g.vertices[c[0]].clone()).collect();
    let edges = g
        .edges
        .iter()
        .filter(|e| e.kind == EdgeKind::Adjacent)
        .map(|e| {
            let (a, b) = g.oriented_ends(e);
            (class_of[a], class_of[b])
        })
        .collect();
    ConflatedGraph { classes, class_of, representatives, edges }
}

/// Everything attached to the longest element of a parabolic subgroup.
#[derive(Debug, Clone)]
pub struct ParabolicGraph {
    pub parabolic: Parabolic,
    pub expanded: ExpandedGraph,
    pub conflated: ConflatedGraph,
    pub source: usize,
    pub sink: usize,
}

impl ParabolicGraph {
    pub fn build(parabolic: &Parabolic) -> Result<Self, GraphError> {
        let (w, _) = longest(parabolic, parabolic.max_index());
        let expanded = build_expanded(&w);
        let conflated = conflate(&expanded);
        let (so, si) = (conflated.sources(), conflated.sinks());
        if so.len() != 1 || si.len() != 1 {
            return Err(GraphError::NotUnique { sources: so.len(), sinks: si.len() });
        }
        Ok(ParabolicGraph { parabolic: parabolic.clone(), expanded, conflated, source: so[0], sink: si[0] })
    }

    pub fn class_of_word(&self, w: &Word) -> Option<usize> {
        self.expanded.index_of(w).map(|v| self.conflated.class_of[v])
    }

    /// Shortest path from `from` to `to` using commutations freely and braid moves only with
    /// the orientation.
    pub fn oriented_path(&self, from: &Word, to: &Word) -> Option<Path> {
        search_path(from, to, |w, pos| is_oriented_move(w.letters(), pos), |_, _| true)
    }

    /// Every class of the conflated graph, via its representative.
    pub fn class_words(&self) -> &[Word] {
        &self.conflated.representatives
    }
}

/// Breadth-first search through reduced words; `braid_ok` and `dist_ok` filter the moves.
fn search_path(
    from: &Word,
    to: &Word,
    braid_ok: impl Fn(&Word, usize) -> bool,
    dist_ok: impl Fn(&Word, usize) -> bool,
) -> Option<Path> {
    let mut prev: HashMap<Word, Option<(Word, Move)>> = HashMap::new();
    prev.insert(from.clone(), None);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(w) = queue.pop_front() {
        if &w == to {
            let mut moves = Vec::new();
            let mut cur = w.clone();
            while let Some(Some((p, m))) = prev.get(&cur) {
                moves.push(*m);
                cur = p.clone();
            }
            moves.reverse();
            let mut path = Path::empty(from.clone());
            for m in moves {
                path.push(m.pos, m.kind).ok()?;
            }
            return Some(path);
        }
        let l = w.letters();
        for pos in 0..l.len() {
            let Some(kind) = move_kind_at(l, pos) else { continue };
            let ok = match kind {
                EdgeKind::Adjacent => braid_ok(&w, pos),
                EdgeKind::Distant => dist_ok(&w, pos),
            };
            if !ok {
                continue;
            }
            let next = apply_move(&w, pos, kind).ok()?;
            if !prev.contains_key(&next) {
                prev.insert(next.clone(), Some((w.clone(), Move { pos, kind })));
                queue.push_back(next);
            }
        }
    }
    None
}

fn desc(a: usize, b: usize) -> Vec<u8> {
    (b..=a).rev().map(|x| x as u8).collect()
}

fn asc(a: usize, b: usize) -> Vec<u8> {
    (a..=b).map(|x| x as u8).collect()
}

/// `s^R` of the interval `[p..q]`: `1 21 321 ...` shifted to start at `p`.
fn s_right_interval(p: usize, q: usize) -> Vec<u8> {
    let mut v = Vec::new();
    for top in p..=q {
        v.extend(desc(top, p));
    }
    v
}

/// `t^R` of `[p..q]`: `q (q-1 q) (q-2 q-1 q) ...`.
fn t_right_interval(p: usize, q: usize) -> Vec<u8> {
    let mut v = Vec::new();
    for bottom in (p..=q).rev() {
        v.extend(asc(bottom, q));
    }
    v
}

/// The diagram flip `k ↦ p + q - k` of the interval `[p..q]`.
pub fn flip_letter(p: usize, q: usize) -> impl Fn(u8) -> u8 + Copy {
    move |k| (p + q) as u8 - k
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Canonical {
    SourceRight,
    SourceLeft,
    SinkRight,
    SinkLeft,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Source,
    Sink,
}

/// Canonical words of the source or sink class. With `i`, the variant whose tail is arranged
/// for bringing `i` to the right end.
pub fn canonical_vertex(parabolic: &Parabolic, which: Canonical, i: Option<usize>) -> Result<Word, GraphError> {
    let (p, q) = parabolic.bounds()?;
    if let Some(i) = i {
        if !parabolic.contains(i) {
            return Err(GraphError::IndexNotInParabolic { index: i, parabolic: parabolic.to_string() });
        }
    }
    let w = match (which, i) {
        (Canonical::SourceRight, None) => s_right_interval(p, q),
        (Canonical::SinkRight, None) => t_right_interval(p, q),
        (Canonical::SourceLeft, None) => s_right_interval(p, q).into_iter().rev().collect(),
        (Canonical::SinkLeft, None) => t_right_interval(p, q).into_iter().rev().collect(),
        (Canonical::SourceRight, Some(i)) => {
            let mut v = Vec::new();
            for top in ((i + 1)..=q).rev() {
                v.extend(asc(p, top));
            }
            v.extend(s_right_interval(p, i));
            v
        }
        (Canonical::SinkRight, Some(i)) => {
            let sigma = flip_letter(p, q);
            let mirrored = canonical_vertex(parabolic, Canonical::SourceRight, Some(sigma(i as u8) as usize))?;
            return Ok(mirrored.relabel(sigma));
        }
        (Canonical::SourceLeft, Some(i)) | (Canonical::SinkLeft, Some(i)) => {
            let right = if which == Canonical::SourceLeft { Canonical::SourceRight } else { Canonical::SinkRight };
            return Ok(canonical_vertex(parabolic, right, Some(i))?.omega());
        }
    };
    Ok(Word::new(w))
}

/// The flip path `F_{i,j}` applied to `word`, whose window at `offset` must read
/// `i, i+1, ..., j, ..., i+1, i`. Ends with `j, ..., i, ..., j` in that window.
pub fn flip_path(i: usize, j: usize, word: &Word, offset: usize) -> Result<Path, GraphError> {
    let len = 2 * (j - i) + 1;
    let window: Vec<u8> = asc(i, j).into_iter().chain(desc(j - 1, i)).collect();
    if word.len() < offset + len || word.letters()[offset..offset + len] != window[..] {
        return Err(GraphError::BadMove { word: word.to_string(), pos: offset, kind: EdgeKind::Adjacent });
    }
    let prefix = word.slice(0, offset);
    let suffix = word.slice(offset + len, word.len());
    let stage = |t: usize| -> Word {
        let mut v = desc(j, j + 1 - t);
        v.extend(asc(i, j - t - 1));
        v.push((j - t) as u8);
        v.extend(desc(j - t - 1, i));
        v.extend(asc(j + 1 - t, j));
        Word::new(v)
    };
    let mut local = Path::empty(stage(0));
    for t in 0..(j - i) {
        if t > 0 {
            local.commute_to(&stage(t))?;
        }
        local.push(j - i - 1, EdgeKind::Adjacent)?;
    }
    let final_window: Vec<u8> = desc(j, i).into_iter().chain(asc(i + 1, j)).collect();
    local.commute_to(&Word::new(final_window))?;
    Ok(local.embed(&prefix, &suffix))
}

/// The reverse of a flip: turns the window `j, ..., i, ..., j` at `offset` into `i, ..., j, ..., i`.
pub fn flip_path_reversed(i: usize, j: usize, word: &Word, offset: usize) -> Result<Path, GraphError> {
    let len = 2 * (j - i) + 1;
    let prefix = word.slice(0, offset.min(word.len()));
    let suffix = word.slice((offset + len).min(word.len()), word.len());
    let start: Vec<u8> = asc(i, j).into_iter().chain(desc(j - 1, i)).collect();
    let forward = flip_path(i, j, &Word::new(start), 0)?;
    let p = forward.reversed().embed(&prefix, &suffix);
    if p.start() != word {
        return Err(GraphError::BadMove { word: word.to_string(), pos: offset, kind: EdgeKind::Adjacent });
    }
    Ok(p)
}

/// The oriented path `V_J` from `s^R_J` to `t^R_J` (connected `J`).
pub fn v_path(parabolic: &Parabolic) -> Result<Path, GraphError> {
    let (p, q) = parabolic.bounds()?;
    v_path_interval(p, q)
}

fn v_path_interval(p: usize, q: usize) -> Result<Path, GraphError> {
    if p == q {
        return Ok(Path::empty(Word::new(vec![p as u8])));
    }
    let inner = v_path_interval(p, q - 1)?;
    let mut path = inner.embed(&Word::empty(), &Word::new(desc(q, p)));
    for k in p..q {
        let mut target = if k < q - 1 { t_right_interval(k + 1, q - 1) } else { Vec::new() };
        let offset = target.len();
        target.extend(asc(k, q));
        target.extend(desc(q - 1, k));
        for m in (p..k).rev() {
            target.extend(asc(m, q));
        }
        path.commute_to(&Word::new(target))?;
        let flip = flip_path(k, q, path.end(), offset)?;
        path = path.then(&flip)?;
    }
    path.commute_to(&Word::new(t_right_interval(p, q)))?;
    Ok(path)
}

/// The flip sequence `FR_i` bringing `i` to the right end, starting at `s^R_J` or `t^R_J`.
pub fn fr_path(parabolic: &Parabolic, i: usize, endpoint: Endpoint) -> Result<Path, GraphError> {
    let (p, q) = parabolic.bounds()?;
    if !parabolic.contains(i) {
        return Err(GraphError::IndexNotInParabolic { index: i, parabolic: parabolic.to_string() });
    }
    match endpoint {
        Endpoint::Sink => {
            let start = Word::new(t_right_interval(p, q));
            let mut path = Path::empty(start);
            if i == q {
                return Ok(path);
            }
            path.commute_to(&canonical_vertex(parabolic, Canonical::SinkRight, Some(i))?)?;
            let base: usize = (p..i).map(|lo| q - lo + 1).sum();
            let mut offset = 0;
            for k in (i..q).rev() {
                let flip = flip_path_reversed(k, q, path.end(), base + offset)?;
                path = path.then(&flip)?;
                offset += q - k;
            }
            Ok(path)
        }
        Endpoint::Source => {
            let sigma = flip_letter(p, q);
            let mirrored = fr_path(parabolic, sigma(i as u8) as usize, Endpoint::Sink)?;
            Ok(mirrored.relabel(sigma))
        }
    }
}

/// An oriented path `s^R_J ⇓ t^R_J` that begins with `FR_i` at the source, ends with the
/// reverse of `FR_i` at the sink, and never changes the last letter in between.
pub fn rewrite_path_for_i(parabolic: &Parabolic, i: usize) -> Result<Path, GraphError> {
    let at_s = fr_path(parabolic, i, Endpoint::Source)?;
    let at_t = fr_path(parabolic, i, Endpoint::Sink)?;
    let (x, y) = (at_s.end().clone(), at_t.end().clone());
    let last = x.len().saturating_sub(1);
    let middle = search_path(
        &x,
        &y,
        |w, pos| pos + 2 < last && is_oriented_move(w.letters(), pos),
        |_, pos| pos + 1 < last,
    )
    .ok_or_else(|| GraphError::NoPath { from: x.to_string(), to: y.to_string() })?;
    at_s.then(&middle)?.then(&at_t.reversed())
}

/// Counts of the elementary cycles of an expanded graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CycleCensus {
    pub disjoint_squares: usize,
    pub distant_hexagons: usize,
    pub distant_octagons: usize,
    pub zamolodchikov: usize,
}

fn window_len(kind: EdgeKind) -> usize {
    match kind {
        EdgeKind::Distant => 2,
        EdgeKind::Adjacent => 3,
    }
}

pub fn classify_cycles(g: &ExpandedGraph) -> CycleCensus {
    let mut squares: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut hexagons: BTreeSet<(Vec<u8>, Vec<u8>, Vec<u8>)> = BTreeSet::new();
    let mut octagons: BTreeSet<(Vec<u8>, Vec<u8>, Vec<u8>)> = BTreeSet::new();
    let mut zamolodchikov: BTreeSet<(Vec<u8>, Vec<u8>, Vec<u8>)> = BTreeSet::new();
    for (u, w) in g.vertices.iter().enumerate() {
        let l = w.letters();
        let moves: Vec<Move> = (0..l.len())
            .filter_map(|pos| move_kind_at(l, pos).map(|kind| Move { pos, kind }))
            .collect();
        for (a, m1) in moves.iter().enumerate() {
            for m2 in &moves[a + 1..] {
                if m1.pos + window_len(m1.kind) <= m2.pos {
                    let w1 = apply_move(w, m1.pos, m1.kind).unwrap();
                    let w2 = apply_move(w, m2.pos, m2.kind).unwrap();
                    let w12 = apply_move(&w1, m2.pos, m2.kind).unwrap();
                    let set: BTreeSet<usize> = [u, g.index[&w1], g.index[&w2], g.index[&w12]].into_iter().collect();
                    squares.insert(set);
                }
            }
        }
        let key = |start: usize, len: usize| {
            let mut mid = l[start..start + len].to_vec();
            mid.sort_unstable();
            (l[..start].to_vec(), mid, l[start + len..].to_vec())
        };
        for start in 0..l.len() {
            if start + 3 <= l.len() {
                let x = &l[start..start + 3];
                let distant = |a: u8, b: u8| a.abs_diff(b) >= 2;
                if distant(x[0], x[1]) && distant(x[0], x[2]) && distant(x[1], x[2]) {
                    hexagons.insert(key(start, 3));
                }
            }
            if start + 4 <= l.len() {
                let x = &l[start..start + 4];
                for c_pos in 0..4 {
                    let c = x[c_pos];
                    let rest: Vec<u8> = x.iter().enumerate().filter(|(k, _)| *k != c_pos).map(|(_, &y)| y).collect();
                    let braid = rest[0] == rest[2] && rest[0].abs_diff(rest[1]) == 1;
                    if braid && c.abs_diff(rest[0]) >= 2 && c.abs_diff(rest[1]) >= 2 {
                        let (pre, mut mid, post) = key(start, 4);
                        mid.dedup();
                        octagons.insert((pre, mid, post));
                    }
                }
            }
            if start + 6 <= l.len() {
                let x = Word::new(l[start..start + 6].to_vec());
                let lo = *x.letters().iter().min().unwrap() as usize;
                let hi = *x.letters().iter().max().unwrap() as usize;
                if hi == lo + 2 {
                    let rank = hi;
                    let target = longest(&Parabolic::interval(lo, hi), rank).0;
                    if eval(&x, rank).map(|e| e == target).unwrap_or(false) {
                        let (pre, mut mid, post) = key(start, 6);
                        mid.dedup();
                        zamolodchikov.insert((pre, mid, post));
                    }
                }
            }
        }
    }
    CycleCensus {
        disjoint_squares: squares.len(),
        distant_hexagons: hexagons.len(),
        distant_octagons: octagons.len(),
        zamolodchikov: zamolodchikov.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn j(lo: usize, hi: usize) -> Parabolic {
        Parabolic::interval(lo, hi)
    }

    #[test]
    fn small_graphs() {
        let g = build_expanded(&longest(&j(1, 2), 2).0);
        assert_eq!(g.vertices().len(), 2);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].kind, EdgeKind::Adjacent);
        let c = conflate(&g);
        assert_eq!(c.len(), 2);
        assert_eq!(c.edges.len(), 1);
        let hex = build_expanded_from_word(&w("135")).unwrap();
        assert_eq!(hex.vertices().len(), 6);
        assert!(hex.edges().iter().all(|e| e.kind == EdgeKind::Distant));
        assert_eq!(conflate(&hex).len(), 1);
    }

    #[test]
    fn source_and_sink() {
        let pg = ParabolicGraph::build(&j(1, 2)).unwrap();
        assert_eq!(pg.class_of_word(&w("121")), Some(pg.source));
        assert_eq!(pg.class_of_word(&w("212")), Some(pg.sink));
        let pg = ParabolicGraph::build(&j(1, 3)).unwrap();
        assert_eq!(pg.class_of_word(&w("121321")), Some(pg.source));
        assert_eq!(pg.class_of_word(&w("323123")), Some(pg.sink));
    }

    #[test]
    fn canonical_words() {
        let i5 = j(1, 5);
        assert_eq!(canonical_vertex(&i5, Canonical::SourceRight, None).unwrap(), w("121321432154321"));
        assert_eq!(canonical_vertex(&i5, Canonical::SinkRight, None).unwrap(), w("545345234512345"));
        assert_eq!(canonical_vertex(&i5, Canonical::SourceRight, Some(3)).unwrap(), w("123451234121321"));
        assert_eq!(canonical_vertex(&i5, Canonical::SourceLeft, None).unwrap(), w("123451234123121"));
    }

    #[test]
    fn flip_examples() {
        let f = flip_path(1, 2, &w("121"), 0).unwrap();
        assert_eq!(f.end(), &w("212"));
        assert_eq!(f.adjacent_len(), 1);
        let f = flip_path(3, 5, &w("34543"), 0).unwrap();
        let braid_ends: Vec<Word> = f
            .words()
            .windows(2)
            .zip(f.moves())
            .filter(|(_, m)| m.kind == EdgeKind::Adjacent)
            .map(|(ws, _)| ws[1].clone())
            .collect();
        assert_eq!(braid_ends, vec![w("35453"), w("54345")]);
        assert!(f.is_oriented());
        let f = flip_path(1, 4, &w("1234321"), 0).unwrap();
        assert_eq!(f.end(), &w("4321234"));
        assert_eq!(f.adjacent_len(), 3);
    }

    #[test]
    fn v_path_examples() {
        assert!(v_path(&j(2, 2)).unwrap().is_empty());
        let v = v_path(&j(1, 2)).unwrap();
        assert_eq!((v.start(), v.end()), (&w("121"), &w("212")));
        let v = v_path(&j(1, 5)).unwrap();
        assert!(v.is_oriented());
        assert_eq!(v.start(), &w("121321432154321"));
        assert_eq!(v.end(), &w("545345234512345"));
        let words = v.words();
        for x in ["434234123454321", "434234543212345", "434543234512345", "454345234512345"] {
            assert!(words.contains(&w(x)), "{x} missing");
        }
    }

    #[test]
    fn fr_examples() {
        let i4 = j(1, 4);
        assert!(fr_path(&i4, 4, Endpoint::Sink).unwrap().is_empty());
        assert!(fr_path(&i4, 1, Endpoint::Source).unwrap().is_empty());
        let fr = fr_path(&i4, 4, Endpoint::Source).unwrap();
        assert_eq!(fr.start(), &w("1213214321"));
        assert_eq!(fr.end(), &w("2324321234"));
        assert!(fr.is_oriented());
        for i in 1..=4 {
            for e in [Endpoint::Source, Endpoint::Sink] {
                assert_eq!(fr_path(&i4, i, e).unwrap().end().last(), Some(i as u8));
            }
        }
    }

    #[test]
    fn rewrite_paths() {
        for (lo, hi) in [(1, 1), (1, 2), (1, 3)] {
            for i in lo..=hi {
                let p = rewrite_path_for_i(&j(lo, hi), i).unwrap();
                assert!(p.is_oriented());
                assert_eq!(p.start(), &canonical_vertex(&j(lo, hi), Canonical::SourceRight, None).unwrap());
                assert_eq!(p.end(), &canonical_vertex(&j(lo, hi), Canonical::SinkRight, None).unwrap());
            }
        }
    }

    #[test]
    fn cycles() {
        let c = classify_cycles(&build_expanded_from_word(&w("135")).unwrap());
        assert_eq!(c.distant_hexagons, 1);
        let c = classify_cycles(&build_expanded_from_word(&w("1214")).unwrap());
        assert_eq!(c.distant_octagons, 1);
        let c = classify_cycles(&build_expanded_from_word(&w("121321")).unwrap());
        assert_eq!(c.disjoint_squares, 2);
        assert_eq!(c.zamolodchikov, 1);
    }
}
