use std::collections::BTreeSet;

use monge_core::generic::{
    edge_count_formula, f_vector, face_lattice, facet_count, generic_facets, generic_vertices, vertex_count,
    FacetKind, GenericPolytope,
};
use monge_core::Block;

#[test]
fn counts_up_to_six() {
    for p in 2..=6 {
        for q in 2..=6 {
            assert_eq!(generic_vertices(p, q).unwrap().len(), vertex_count(p, q));
            assert_eq!(generic_facets(p, q).unwrap().len(), facet_count(p, q));
        }
    }
}

#[test]
fn edge_routes_agree_up_to_five() {
    for p in 2..=5 {
        for q in 2..=5 {
            let poly = GenericPolytope::new(p, q).unwrap();
            let explicit: BTreeSet<_> = poly.edges_explicit().into_iter().collect();
            let oracle: BTreeSet<_> = poly.edges_from_incidence().into_iter().collect();
            assert_eq!(explicit, oracle, "{p}x{q}");
            assert_eq!(explicit.len() as u64, edge_count_formula(p, q).unwrap(), "{p}x{q}");
        }
    }
}

#[test]
fn strip_pair_exclusions() {
    let poly = GenericPolytope::new(2, 3).unwrap();
    let edges = poly.edges_from_incidence();
    let pair = |x, y| {
        let (a, b) = (poly.index_of(x), poly.index_of(y));
        (a.min(b), a.max(b))
    };
    assert!(!edges.contains(&pair(Block::Hor { i: 1 }, Block::Hor { i: 2 })));
    assert!(edges.contains(&pair(Block::Ver { j: 1 }, Block::Ver { j: 2 })));
    // Bottom strip plus a full-height NE block.
    assert!(!edges.contains(&pair(Block::Hor { i: 2 }, Block::Ne { a: 1, b: 1 })));
    assert!(edges.contains(&pair(Block::Hor { i: 1 }, Block::Ne { a: 1, b: 1 })));
    assert_eq!(edges.len(), 28);
}

#[test]
fn vertices_satisfy_facets_with_equality_per_incidence() {
    for (p, q) in [(2, 2), (2, 4), (3, 3), (3, 5), (4, 4)] {
        let poly = GenericPolytope::new(p, q).unwrap();
        let inc = poly.incidence();
        for (f, facet) in poly.facets.iter().enumerate() {
            for v in 0..poly.vertices.len() {
                let slack = poly.slack(v, facet.kind);
                assert!(slack >= 0);
                assert_eq!(slack == 0, inc[v][f], "{p}x{q} vertex {v} facet {:?}", facet.kind);
            }
        }
    }
}

#[test]
fn f_vectors() {
    assert_eq!(f_vector(2, 2).unwrap(), vec![1, 6, 9, 5, 1]);
    let f23 = f_vector(2, 3).unwrap();
    assert_eq!((f23[1], f23[2], f23[5]), (9, 28, 8));
    let f33 = f_vector(3, 3).unwrap();
    assert_eq!((f33[1], f33[2], f33[8]), (14, 78, 13));
    // Euler: alternating sum over proper nonempty faces equals 1 - (-1)^d.
    for f in [&f23, &f33] {
        let d = f.len() as i64 - 2;
        let euler: i64 = f[1..f.len() - 1].iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        assert_eq!(euler, 1 - (-1i64).pow(d as u32));
    }
}

#[test]
fn lattice_is_closed_and_graded() {
    for (p, q) in [(2, 2), (2, 3), (3, 3)] {
        let lat = face_lattice(p, q).unwrap();
        let members: BTreeSet<_> = lat.faces.iter().map(|f| f.vertices).collect();
        for a in &lat.faces {
            for b in &lat.faces {
                assert!(members.contains(&a.vertices.intersection(b.vertices)));
            }
        }
        for (k, face) in lat.faces.iter().enumerate() {
            if face.dim > 0 {
                assert!(!lat.covers[k].is_empty());
                for &c in &lat.covers[k] {
                    assert_eq!(lat.faces[c].dim, face.dim - 1);
                    assert!(lat.faces[c].vertices.is_subset(face.vertices));
                    assert_ne!(lat.faces[c].vertices, face.vertices);
                }
            }
        }
        let full = lat.faces.last().unwrap();
        assert_eq!(full.dim, (p * q) as isize - 1);
        assert!(lat.faces.iter().filter(|f| f.dim == 0).all(|f| f.vertices.len() == 1));
        let poly = GenericPolytope::new(p, q).unwrap();
        for facet in &poly.facets {
            assert!(matches!(facet.kind, FacetKind::MongeTight { .. } | FacetKind::NonnegTight { .. }));
            assert!(lat.index_of(facet.vertices).is_some());
        }
    }
}
