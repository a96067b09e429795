use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::ProjectiveLine;
use crate::error::{Error, Result};

/// Distance value for unreachable pairs.
const UNREACHABLE: u32 = u32::MAX;

/// The distant graph on `P(R)` with components and all-pairs distances.
#[derive(Debug, Clone)]
pub struct DistantGraph {
    adjacency: Vec<Vec<usize>>,
    component: Vec<usize>,
    diameters: Vec<u32>,
    dist: Vec<Vec<u32>>,
}

impl DistantGraph {
    /// Builds the graph and checks that all components share one diameter.
    pub fn build(line: &ProjectiveLine) -> Result<Self> {
        let n = line.len();
        let adjacency: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && line.distant(line.point(i), line.point(j)))
                    .collect()
            })
            .collect();
        let dist: Vec<Vec<u32>> = (0..n).into_par_iter().map(|s| bfs(&adjacency, s)).collect();

        let mut component = vec![usize::MAX; n];
        let mut count = 0;
        for s in 0..n {
            if component[s] != usize::MAX {
                continue;
            }
            for t in 0..n {
                if dist[s][t] != UNREACHABLE {
                    component[t] = count;
                }
            }
            count += 1;
        }
        let mut diameters = vec![0u32; count];
        for s in 0..n {
            let ecc = dist[s].iter().copied().filter(|&d| d != UNREACHABLE).max().unwrap_or(0);
            let c = component[s];
            diameters[c] = diameters[c].max(ecc);
        }
        if diameters.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::DiameterMismatch(diameters));
        }
        Ok(Self {
            adjacency,
            component,
            diameters,
            dist,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn component_of(&self, i: usize) -> usize {
        self.component[i]
    }

    pub fn component_count(&self) -> usize {
        self.diameters.len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn component_diameters(&self) -> &[u32] {
        &self.diameters
    }

    /// The diameter shared by every component.
    pub fn diameter(&self) -> u32 {
        self.diameters.first().copied().unwrap_or(0)
    }

    pub fn distance(&self, i: usize, j: usize) -> Option<u32> {
        let d = self.dist[i][j];
        (d != UNREACHABLE).then_some(d)
    }

    /// DOT rendering with vertices in canonical order; the `component`
    /// attribute carries the component id.
    pub fn to_dot(&self, line: &ProjectiveLine) -> String {
        let r = line.ring();
        let name = |i: usize| line.point(i).label(r);
        let mut out = String::new();
        writeln!(out, "graph distant {{").unwrap();
        writeln!(out, "  label=\"distant graph of P({})\";", r.name()).unwrap();
        for i in 0..self.vertex_count() {
            let c = self.component[i];
            writeln!(
                out,
                "  \"{}\" [component={c}, colorscheme=set19, color={}];",
                name(i),
                c % 9 + 1
            )
            .unwrap();
        }
        for i in 0..self.vertex_count() {
            for &j in self.adjacency[i].iter().filter(|&&j| j > i) {
                writeln!(out, "  \"{}\" -- \"{}\";", name(i), name(j)).unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

fn bfs(adjacency: &[Vec<usize>], s: usize) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; adjacency.len()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v] {
            if dist[w] == UNREACHABLE {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{build_ring, RingSpec};

    fn graph(spec: RingSpec) -> (ProjectiveLine, DistantGraph) {
        let line = ProjectiveLine::enumerate(build_ring(spec).unwrap()).unwrap();
        let g = DistantGraph::build(&line).unwrap();
        (line, g)
    }

    #[test]
    fn field_gives_complete_graph() {
        let (_, g) = graph(RingSpec::FiniteField { q: 4 });
        assert_eq!((g.vertex_count(), g.edge_count(), g.diameter()), (5, 10, 1));
        assert!(g.is_connected());
    }

    #[test]
    fn dual_numbers_give_octahedron() {
        let (_, g) = graph(RingSpec::DualNumbers { q: 2 });
        assert_eq!((g.vertex_count(), g.edge_count(), g.diameter()), (6, 12, 2));
        // K_{2,2,2}: every vertex misses exactly one other vertex.
        assert!((0..6).all(|i| g.neighbors(i).len() == 4));
    }

    #[test]
    fn m2f2_is_connected_with_diameter_two() {
        let (_, g) = graph(RingSpec::Matrix2 { q: 2 });
        assert_eq!(g.vertex_count(), 35);
        assert!(g.is_connected());
        assert_eq!(g.diameter(), 2);
    }

    #[test]
    fn adjacency_is_symmetric_and_irreflexive() {
        let (_, g) = graph(RingSpec::Product { q: 3 });
        for i in 0..g.vertex_count() {
            assert!(!g.neighbors(i).contains(&i));
            for &j in g.neighbors(i) {
                assert!(g.neighbors(j).contains(&i));
            }
        }
    }

    #[test]
    fn dot_output_is_stable() {
        let (line, g) = graph(RingSpec::FiniteField { q: 2 });
        let dot = g.to_dot(&line);
        assert_eq!(dot, g.to_dot(&line));
        assert_eq!(dot.matches(" -- ").count(), 3);
        assert!(dot.contains("\"(0,1)\" [component=0"));
    }
}
