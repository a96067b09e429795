//! Finite affine and projective planes given by explicit line lists.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// An incidence structure on points `0..points` with lines as sorted point lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePlane {
    points: usize,
    lines: Vec<Vec<usize>>,
}

impl AffinePlane {
    pub fn new(points: usize, lines: Vec<Vec<usize>>) -> Self {
        let mut lines: Vec<Vec<usize>> = lines
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l.dedup();
                l
            })
            .collect();
        lines.sort();
        lines.dedup();
        Self { points, lines }
    }

    pub fn point_count(&self) -> usize {
        self.points
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    /// Common line size, if all lines have the same size.
    pub fn line_size(&self) -> Option<usize> {
        let s = self.lines.first()?.len();
        self.lines.iter().all(|l| l.len() == s).then_some(s)
    }

    /// Any two distinct points lie on exactly one line.
    pub fn two_point_axiom(&self) -> bool {
        let n = self.points;
        let mut count = vec![0u16; n * n];
        for l in &self.lines {
            for (i, &x) in l.iter().enumerate() {
                for &y in &l[i + 1..] {
                    count[x * n + y] += 1;
                }
            }
        }
        (0..n).all(|x| (x + 1..n).all(|y| count[x * n + y] == 1))
    }

    fn disjoint(a: &[usize], b: &[usize]) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// For every line `l` and point `p` off `l` there is exactly one line
    /// through `p` disjoint from `l`.
    pub fn playfair(&self) -> bool {
        let through = self.lines_through();
        self.lines.par_iter().all(|l| {
            (0..self.points).filter(|p| l.binary_search(p).is_err()).all(|p| {
                through[p]
                    .iter()
                    .filter(|&&m| Self::disjoint(l, &self.lines[m]))
                    .count()
                    == 1
            })
        })
    }

    fn lines_through(&self) -> Vec<Vec<usize>> {
        let mut through = vec![Vec::new(); self.points];
        for (i, l) in self.lines.iter().enumerate() {
            for &p in l {
                through[p].push(i);
            }
        }
        through
    }

    /// Parallel classes as lists of line indices; requires Playfair.
    pub fn parallel_classes(&self) -> Vec<Vec<usize>> {
        let mut class = vec![usize::MAX; self.lines.len()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.lines.len() {
            if class[i] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = (i..self.lines.len())
                .filter(|&j| class[j] == usize::MAX && (j == i || Self::disjoint(&self.lines[i], &self.lines[j])))
                .collect();
            for &j in &members {
                class[j] = out.len();
            }
            out.push(members);
        }
        out
    }

    /// Adds one point per parallel class and the line at infinity. Point
    /// `points + k` is the direction of the `k`-th parallel class.
    pub fn closure(&self) -> Result<ProjectivePlane> {
        if !(self.two_point_axiom() && self.playfair()) {
            return Err(Error::NotAPlane("affine axioms fail".into()));
        }
        let n = self.points;
        let classes = self.parallel_classes();
        let mut lines = self.lines.clone();
        for (k, cls) in classes.iter().enumerate() {
            for &i in cls {
                lines[i].push(n + k);
            }
        }
        lines.push((n..n + classes.len()).collect());
        ProjectivePlane::new(n + classes.len(), lines)
    }
}

/// A finite projective plane with join and meet tables.
#[derive(Debug, Clone)]
pub struct ProjectivePlane {
    points: usize,
    lines: Vec<Vec<usize>>,
    incident: Vec<bool>,
    join: Vec<u32>,
    meet: Vec<u32>,
    through: Vec<Vec<usize>>,
}

/// Which centers the Desargues search runs over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DesarguesScope {
    AllCenters,
    Centers(Vec<usize>),
}

/// Two triangles `abc`, `a2 b2 c2` in perspective from `center` whose
/// corresponding sides meet in the non-collinear points `p`, `q`, `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DesarguesWitness {
    pub center: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub a2: usize,
    pub b2: usize,
    pub c2: usize,
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesarguesOutcome {
    pub centers: usize,
    /// Configurations examined; only reported when the search ran to the end.
    pub checked: Option<u64>,
    pub witness: Option<DesarguesWitness>,
}

impl DesarguesOutcome {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

const NONE: u32 = u32::MAX;

impl ProjectivePlane {
    pub fn new(points: usize, lines: Vec<Vec<usize>>) -> Result<Self> {
        let nl = lines.len();
        if nl != points {
            return Err(Error::NotAPlane(format!("{points} points but {nl} lines")));
        }
        let mut incident = vec![false; nl * points];
        let mut through = vec![Vec::new(); points];
        let mut join = vec![NONE; points * points];
        for (i, l) in lines.iter().enumerate() {
            for &p in l {
                incident[i * points + p] = true;
                through[p].push(i);
            }
            for &x in l {
                for &y in l {
                    if x != y {
                        if join[x * points + y] != NONE {
                            return Err(Error::NotAPlane("two points on two lines".into()));
                        }
                        join[x * points + y] = i as u32;
                    }
                }
            }
        }
        let mut meet = vec![NONE; nl * nl];
        for (p, ls) in through.iter().enumerate() {
            for &i in ls {
                for &j in ls {
                    if i != j {
                        meet[i * nl + j] = p as u32;
                    }
                }
            }
        }
        let joined = (0..points).all(|x| (0..points).all(|y| x == y || join[x * points + y] != NONE));
        let met = (0..nl).all(|i| (0..nl).all(|j| i == j || meet[i * nl + j] != NONE));
        if !(joined && met) {
            return Err(Error::NotAPlane("join or meet undefined".into()));
        }
        Ok(Self {
            points,
            lines,
            incident,
            join,
            meet,
            through,
        })
    }

    pub fn point_count(&self) -> usize {
        self.points
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn order(&self) -> usize {
        self.lines[0].len() - 1
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.points + y] as usize
    }

    pub fn meet(&self, l: usize, m: usize) -> usize {
        self.meet[l * self.points + m] as usize
    }

    pub fn incident(&self, l: usize, p: usize) -> bool {
        self.incident[l * self.points + p]
    }

    /// Searches for a counterexample to Desargues' theorem, returning the
    /// first one in (center, lines, points) order.
    ///
    /// For a center `O` and three lines through it there are at most
    /// `(n^3)(n-1)^3 / 2` triangle pairs (a plane of order `n`), so the count
    /// over all centers is bounded by
    /// `(n^2+n+1) * C(n+1, 3) * n^3 (n-1)^3 / 2`.
    pub fn desargues(&self, scope: &DesarguesScope) -> DesarguesOutcome {
        let centers: Vec<usize> = match scope {
            DesarguesScope::AllCenters => (0..self.points).collect(),
            DesarguesScope::Centers(c) => c.clone(),
        };
        let mut jobs = Vec::new();
        for &o in &centers {
            let ls = &self.through[o];
            for i in 0..ls.len() {
                for j in i + 1..ls.len() {
                    for k in j + 1..ls.len() {
                        jobs.push((o, [ls[i], ls[j], ls[k]]));
                    }
                }
            }
        }
        // Counts are only summed when no job fails, so the total does not
        // depend on scheduling.
        let checked = AtomicU64::new(0);
        let witness = jobs
            .par_iter()
            .find_map_first(|&(o, ls)| match self.search_triple(o, ls) {
                Ok(c) => {
                    checked.fetch_add(c, Ordering::Relaxed);
                    None
                }
                Err(w) => Some(w),
            });
        DesarguesOutcome {
            centers: centers.len(),
            checked: witness.is_none().then(|| checked.into_inner()),
            witness,
        }
    }

    fn search_triple(&self, o: usize, ls: [usize; 3]) -> std::result::Result<u64, DesarguesWitness> {
        let off = |l: usize| -> Vec<usize> { self.lines[l].iter().copied().filter(|&p| p != o).collect() };
        let (la, lb, lc) = (off(ls[0]), off(ls[1]), off(ls[2]));
        let mut checked = 0;
        for &a in &la {
            for &b in &lb {
                let ab = self.join(a, b);
                for &c in &lc {
                    if self.incident(ab, c) {
                        continue;
                    }
                    let (ac, bc) = (self.join(a, c), self.join(b, c));
                    // Swapping the two triangles gives the same configuration.
                    for &a2 in la.iter().filter(|&&x| x > a) {
                        for &b2 in lb.iter().filter(|&&x| x != b) {
                            let ab2 = self.join(a2, b2);
                            let p = self.meet(ab, ab2);
                            for &c2 in lc.iter().filter(|&&x| x != c) {
                                if self.incident(ab2, c2) {
                                    continue;
                                }
                                checked += 1;
                                let q = self.meet(ac, self.join(a2, c2));
                                let r = self.meet(bc, self.join(b2, c2));
                                if !self.incident(self.join(p, q), r) {
                                    return Err(DesarguesWitness {
                                        center: o,
                                        a,
                                        b,
                                        c,
                                        a2,
                                        b2,
                                        c2,
                                        p,
                                        q,
                                        r,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(checked)
    }
}
