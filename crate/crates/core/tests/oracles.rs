//! Counts and structures checked against brute-force oracles that share no
//! code with the library's enumeration paths.

use std::collections::{BTreeSet, HashSet};

use chaingeom::chains::{Block, ChainGeometry, DEFAULT_ORBIT_CAP};
use chaingeom::compat::{delta_orbits, derive_plane};
use chaingeom::projline::DistantGraph;
use chaingeom::ring::{build_ring, build_subfield, zoo, Elem, Embedding, Ring, RingSpec};

fn geometry(spec: RingSpec, emb: Embedding) -> ChainGeometry {
    let r = build_ring(spec).unwrap();
    let k = build_subfield(&r, emb).unwrap();
    ChainGeometry::new(r, k).unwrap()
}

/// Units by scanning for two-sided inverses.
fn unit_count(r: &Ring) -> usize {
    r.elements()
        .filter(|&x| r.elements().any(|y| r.mul(x, y) == r.one() && r.mul(y, x) == r.one()))
        .count()
}

/// `|P(R)|` from the structure of each family: `R/J` is a product of fields
/// or `M2(F_q)`, and each point of `P(R/J)` has `|J|` points above it.
fn expected_points(spec: RingSpec) -> usize {
    let q = spec.q() as usize;
    match spec {
        RingSpec::FiniteField { .. } => q + 1,
        RingSpec::DualNumbers { .. } => (q + 1) * q,
        RingSpec::Product { .. } => (q + 1) * (q + 1),
        RingSpec::UpperTriangular2 { .. } => (q + 1) * (q + 1) * q,
        // Lines of PG(3, q).
        RingSpec::Matrix2 { .. } => (q * q + 1) * (q * q + q + 1),
    }
}

fn expected_units(spec: RingSpec) -> usize {
    let q = spec.q() as usize;
    match spec {
        RingSpec::FiniteField { .. } => q - 1,
        RingSpec::DualNumbers { .. } => (q - 1) * q,
        RingSpec::Product { .. } => (q - 1) * (q - 1),
        RingSpec::UpperTriangular2 { .. } => (q - 1) * (q - 1) * q,
        RingSpec::Matrix2 { .. } => (q * q - 1) * (q * q - q),
    }
}

#[test]
fn unit_and_point_counts_match_structure() {
    for (spec, emb) in zoo() {
        let g = geometry(spec, emb);
        let r = g.ring();
        assert_eq!(unit_count(r), r.units().len(), "{}", spec.name());
        assert_eq!(r.units().len(), expected_units(spec), "{}", spec.name());
        assert_eq!(g.line().len(), expected_points(spec), "{}", spec.name());
    }
}

#[test]
fn m2_point_counts_are_gaussian_binomials() {
    assert_eq!(expected_points(RingSpec::Matrix2 { q: 2 }), 35);
    assert_eq!(expected_points(RingSpec::Matrix2 { q: 3 }), 130);
    assert_eq!(
        geometry(RingSpec::Matrix2 { q: 3 }, Embedding::Singer).line().len(),
        130
    );
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn field_chain_counts_follow_the_three_point_axiom() {
    // Over a field any three points lie on exactly one chain.
    for (spec, emb) in [
        (RingSpec::FiniteField { q: 4 }, Embedding::Prime),
        (RingSpec::FiniteField { q: 8 }, Embedding::Prime),
        (RingSpec::FiniteField { q: 9 }, Embedding::Prime),
    ] {
        let g = geometry(spec, emb);
        let n = g.line().len();
        let c = g.field().len() + 1;
        let chains = g.chain_orbit(None, DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(chains.len(), binom(n, 3) / binom(c, 3), "{}", spec.name());
    }
}

#[test]
fn chain_totals_double_count() {
    // Transitivity on points: |P| * chains-through-a-point = chains * chain-size.
    for (spec, emb) in zoo() {
        let g = geometry(spec, emb);
        let all = g.chain_orbit(None, DEFAULT_ORBIT_CAP).unwrap();
        let through = g.chain_orbit(Some(g.line().infinity()), DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(
            g.line().len() * through.len(),
            all.len() * (g.field().len() + 1),
            "{}",
            spec.name()
        );
    }
}

#[test]
fn m2f3_chain_counts() {
    let g = geometry(RingSpec::Matrix2 { q: 3 }, Embedding::Singer);
    assert_eq!(g.chain_orbit(None, DEFAULT_ORBIT_CAP).unwrap().len(), 2106);
    assert_eq!(
        g.chain_orbit(Some(g.line().infinity()), DEFAULT_ORBIT_CAP)
            .unwrap()
            .len(),
        162
    );
}

#[test]
fn residue_blocks_are_the_sets_dka_plus_c() {
    for (spec, emb) in zoo() {
        let g = geometry(spec, emb);
        let r = g.ring();
        let k = g.field();
        let mut direct = BTreeSet::new();
        for &d in r.units() {
            for &a in r.units() {
                for c in r.elements() {
                    direct.insert(Block::new(
                        k.elements().iter().map(|&x| r.add(r.mul(r.mul(d, x), a), c)).collect(),
                    ));
                }
            }
        }
        let res = g.residue_at(g.line().infinity(), DEFAULT_ORBIT_CAP).unwrap();
        let from_chains: BTreeSet<Block> = res.blocks().iter().cloned().collect();
        assert_eq!(direct, from_chains, "{}", spec.name());
    }
}

#[test]
fn class_count_is_the_number_of_conjugates() {
    for (spec, emb) in zoo() {
        let g = geometry(spec, emb);
        let r = g.ring();
        let k: BTreeSet<Elem> = g.field().elements().iter().copied().collect();
        let conjugates: HashSet<BTreeSet<Elem>> = r
            .units()
            .iter()
            .map(|&u| {
                let ui = r.inverse(u).unwrap();
                k.iter().map(|&x| r.mul(r.mul(ui, x), u)).collect()
            })
            .collect();
        let res = g.residue_at(g.line().infinity(), DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(
            delta_orbits(&g, &res).unwrap().len(),
            conjugates.len(),
            "{}",
            spec.name()
        );
    }
}

#[test]
fn m2f3_normalizer_has_index_three() {
    let g = geometry(RingSpec::Matrix2 { q: 3 }, Embedding::Singer);
    let r = g.ring();
    let k: BTreeSet<Elem> = g.field().elements().iter().copied().collect();
    let normalizer = r
        .units()
        .iter()
        .filter(|&&u| {
            let ui = r.inverse(u).unwrap();
            k.iter().map(|&x| r.mul(r.mul(ui, x), u)).collect::<BTreeSet<_>>() == k
        })
        .count();
    assert_eq!(normalizer, 16);
    assert_eq!(r.units().len() / normalizer, 3);
}

#[test]
fn small_distant_graphs() {
    let edges = |spec, emb| {
        let g = geometry(spec, emb);
        let d = DistantGraph::build(g.line()).unwrap();
        (d.vertex_count(), d.edge_count(), d.diameter(), d.is_connected())
    };
    // K5
    assert_eq!(
        edges(RingSpec::FiniteField { q: 4 }, Embedding::Prime),
        (5, 10, 1, true)
    );
    // Octahedron: each of 6 vertices misses exactly one other.
    assert_eq!(
        edges(RingSpec::DualNumbers { q: 2 }, Embedding::Scalar),
        (6, 12, 2, true)
    );
    let (v, _, diam, conn) = edges(RingSpec::Matrix2 { q: 2 }, Embedding::Singer);
    assert_eq!((v, diam, conn), (35, 2, true));
}

#[test]
fn m2_distant_relation_is_complementary_subspaces() {
    // R(a,b) for M2(F_q) is the row space of the 2x4 matrix (a|b); two points
    // are distant iff the row spaces span F_q^4.
    let r = build_ring(RingSpec::Matrix2 { q: 2 }).unwrap();
    let k = build_subfield(&r, Embedding::Singer).unwrap();
    let g = ChainGeometry::new(r.clone(), k).unwrap();
    let rowspace = |p: chaingeom::projline::Point| -> BTreeSet<u8> {
        let (a, b) = p.rep();
        let (ra, rb) = (label_entries(&r, a), label_entries(&r, b));
        let rows = [[ra[0], ra[1], rb[0], rb[1]], [ra[2], ra[3], rb[2], rb[3]]];
        let mut out = BTreeSet::new();
        for l in 0..2u8 {
            for m in 0..2u8 {
                let v: Vec<u8> = (0..4).map(|i| (l * rows[0][i] + m * rows[1][i]) % 2).collect();
                out.insert(v.iter().fold(0, |acc, &x| acc * 2 + x));
            }
        }
        out
    };
    for &p in g.line().points() {
        assert_eq!(rowspace(p).len(), 4);
        for &q in g.line().points() {
            let sum: BTreeSet<u8> = rowspace(p)
                .iter()
                .flat_map(|&x| rowspace(q).into_iter().map(move |y| x ^ y))
                .collect();
            assert_eq!(g.line().distant(p, q), sum.len() == 16);
        }
    }
}

/// Entries of a matrix label `[a,b;c,d]` over a prime field.
fn label_entries(r: &Ring, x: Elem) -> [u8; 4] {
    let l = r.label(x);
    let v: Vec<u8> = l
        .trim_matches(|c| c == '[' || c == ']')
        .split([',', ';'])
        .map(|s| s.parse().unwrap())
        .collect();
    [v[0], v[1], v[2], v[3]]
}

/// Re-checks a reported failing Desargues configuration using only the line
/// list of the derived plane.
#[test]
fn hall_plane_witness_is_a_genuine_counterexample() {
    let rep = derive_plane(3).unwrap();
    let r = build_ring(RingSpec::Matrix2 { q: 3 }).unwrap();
    let w = rep
        .derived
        .failing_configuration
        .clone()
        .expect("a failing configuration");
    let lines = &rep.derived_lines;
    assert_eq!(lines.len(), 90);

    #[derive(Clone, Copy, PartialEq, Debug)]
    enum P {
        Affine(Elem),
        Dir(usize),
    }
    let by_label = |l: &str| r.elements().find(|&x| r.label(x) == l).unwrap();
    let zero = r.zero();
    let direction = |l: &Block| {
        let shift = l.coords()[0];
        let through0 = l.map(|x| r.sub(x, shift));
        lines.iter().position(|m| *m == through0).unwrap()
    };
    let parse = |s: &str| -> P {
        match s.strip_prefix("dir(").and_then(|t| t.strip_suffix(')')) {
            Some(x) => {
                let x = by_label(x);
                P::Dir(lines.iter().position(|m| m.contains(zero) && m.contains(x)).unwrap())
            }
            None => P::Affine(by_label(s)),
        }
    };
    // A projective line: an affine line with its direction, or the line at infinity.
    #[derive(Clone, PartialEq, Debug)]
    enum L {
        Affine(usize),
        Infinity,
    }
    let on = |p: P, l: &L| match (p, l) {
        (P::Affine(x), L::Affine(i)) => lines[*i].contains(x),
        (P::Dir(d), L::Affine(i)) => direction(&lines[*i]) == d,
        (P::Affine(_), L::Infinity) => false,
        (P::Dir(_), L::Infinity) => true,
    };
    let all_lines: Vec<L> = (0..lines.len()).map(L::Affine).chain([L::Infinity]).collect();
    let join = |a: P, b: P| -> L {
        let v: Vec<&L> = all_lines.iter().filter(|l| on(a, l) && on(b, l)).collect();
        assert_eq!(v.len(), 1);
        v[0].clone()
    };
    let collinear = |a: P, b: P, c: P| on(c, &join(a, b));

    let o = parse(&w.center);
    let t: Vec<P> = w.triangle.iter().map(|s| parse(s)).collect();
    let t2: Vec<P> = w.perspective_triangle.iter().map(|s| parse(s)).collect();
    let s: Vec<P> = w.side_intersections.iter().map(|s| parse(s)).collect();
    for i in 0..3 {
        assert!(collinear(o, t[i], t2[i]));
    }
    assert!(!collinear(t[0], t[1], t[2]));
    assert!(!collinear(t2[0], t2[1], t2[2]));
    for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        assert!(on(s[k], &join(t[i], t[j])));
        assert!(on(s[k], &join(t2[i], t2[j])));
    }
    assert!(!collinear(s[0], s[1], s[2]));
}
