use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{canonical_pair, DistantGraph, Matrix2, Point, ProjectiveLine};
use crate::ring::{Elem, Ring};

/// A word `(t_1, ..., t_n)` standing for `(1,0) E(t_n) E(t_{n-1}) ... E(t_1)`.
/// `ts[0]` is `t_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EWord(pub Vec<Elem>);

impl EWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The row `(1,0) E(t_n) ... E(t_1)`.
pub fn eword_row(r: &Ring, w: &EWord) -> (Elem, Elem) {
    let mut row = (r.one(), r.zero());
    for &t in w.0.iter().rev() {
        row = Matrix2::elementary(r, t).row_times(r, row);
    }
    row
}

pub fn eword_to_point(r: &Ring, w: &EWord) -> Point {
    let (a, b) = eword_row(r, w);
    let (a, b) = canonical_pair(r, a, b);
    Point { a, b }
}

/// Shortest words for every point of the component of `R(1,0)`.
///
/// Prepending `t_0` to a word multiplies its row by `E(t_0)` on the right, so
/// a breadth-first search from `R(1,0)` under `p -> p E(t)` yields shortest
/// words. The search depth is capped at `max(2, m) + 1` for diameter `m`.
#[derive(Debug, Clone)]
pub struct WordTable {
    words: Vec<Option<EWord>>,
    cap: usize,
}

impl WordTable {
    pub fn build(line: &ProjectiveLine, graph: &DistantGraph) -> Self {
        let r = line.ring();
        let cap = (graph.diameter() as usize).max(2) + 1;
        let mut words: Vec<Option<EWord>> = vec![None; line.len()];
        let start = line.index_of(line.infinity()).unwrap();
        words[start] = Some(EWord(Vec::new()));
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let w = words[i].clone().unwrap();
            if w.len() >= cap {
                continue;
            }
            let p = line.point(i);
            for t in r.elements() {
                let next = line.act(p, &Matrix2::elementary(r, t));
                let j = line.index_of(next).unwrap();
                if words[j].is_none() {
                    let mut ts = Vec::with_capacity(w.len() + 1);
                    ts.push(t);
                    ts.extend_from_slice(&w.0);
                    words[j] = Some(EWord(ts));
                    queue.push_back(j);
                }
            }
        }
        Self { words, cap }
    }

    pub fn word(&self, i: usize) -> Option<&EWord> {
        self.words[i].as_ref()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }
}

/// A shortest word for `p`, or `None` outside the component of `R(1,0)`.
pub fn point_to_eword(line: &ProjectiveLine, graph: &DistantGraph, p: Point) -> Option<EWord> {
    let table = WordTable::build(line, graph);
    table.word(line.index_of(p)?).cloned()
}
