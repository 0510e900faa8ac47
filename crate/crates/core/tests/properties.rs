use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use monge_core::counting::{coefficients, SeriesSpec};
use monge_core::generic::{face_lattice, GenericPolytope};
use monge_core::optimize::{northwest_corner, pyramidal_tsp, TransportInstance};
use monge_core::sample::{random_monge, random_square_monge};
use monge_core::scalar::{format_scalar, int, parse_scalar, ratio};
use monge_core::stanley::{base_size, canonical_form_of, reconstruct_of, CanonicalForm, ColumnSubset};
use monge_core::symmetric::{decompose_symmetric, symmetric_vertices};
use monge_core::volume::{simplex_volume, ChartPoint};
use monge_core::{generator, Block, Matrix, VertexLabel};

/// Monge test over every pair of rows and columns.
fn monge_all_quadruples(m: &Matrix) -> bool {
    for i in 1..=m.rows() {
        for big_i in i + 1..=m.rows() {
            for j in 1..=m.cols() {
                for big_j in j + 1..=m.cols() {
                    if m.get(i, j) + m.get(big_i, big_j) > m.get(i, big_j) + m.get(big_i, j) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn block_strategy(p: usize, q: usize) -> BoxedStrategy<Block> {
    prop_oneof![
        (1..p, 1..q).prop_map(|(a, b)| Block::Ne { a, b }),
        (1..p, 1..q).prop_map(|(a, b)| Block::Sw { a, b }),
        (1..=p).prop_map(|i| Block::Hor { i }),
        (1..=q).prop_map(|j| Block::Ver { j }),
    ]
    .boxed()
}

fn generic_label() -> impl Strategy<Value = VertexLabel> {
    (2usize..=7, 2usize..=7)
        .prop_flat_map(|(p, q)| (Just(p), Just(q), block_strategy(p, q)))
        .prop_map(|(p, q, block)| VertexLabel::new(block, p, q, true).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn adjacent_test_matches_quadruple_test(entries in prop::collection::vec(0i64..=20, 36), seed in any::<u64>(), planted in any::<bool>()) {
        // Random matrices are almost never Monge; plant Monge ones half the time.
        let m = if planted {
            random_monge(6, 6, 3, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
        } else {
            Matrix::from_fn(6, 6, |i, j| int(entries[(i - 1) * 6 + j - 1])).unwrap()
        };
        prop_assert_eq!(m.is_monge(), monge_all_quadruples(&m));
    }
}

proptest! {
    #[test]
    fn hatted_generators_are_monge_probabilities(label in generic_label()) {
        let g = generator(&label).unwrap();
        prop_assert!(g.is_nonnegative());
        prop_assert_eq!(g.entry_sum(), int(1));
        prop_assert!(g.is_monge());
    }

    #[test]
    fn shorthand_identities(n in 2usize..=7, a in 1usize..7, b in 1usize..7, i in 1usize..=7) {
        prop_assume!(a + b <= n && i <= n);
        let raw = |block| generator(&VertexLabel::new(block, n, n, false).unwrap()).unwrap();
        prop_assert_eq!(raw(Block::Nesw { a, b }), &raw(Block::Ne { a, b }) + &raw(Block::Sw { a: b, b: a }));
        prop_assert_eq!(raw(Block::Hv { i }), &raw(Block::Hor { i }) + &raw(Block::Ver { j: i }));
    }

    #[test]
    fn scalar_text_round_trip(num in -10_000i64..10_000, den in 1i64..10_000) {
        let x = ratio(num, den);
        prop_assert_eq!(parse_scalar(&format_scalar(&x)).unwrap(), x);
    }

    #[test]
    fn symmetric_round_trip(n in 2usize..=6, hollow in any::<bool>(), weights in prop::collection::vec(0i64..5, 21)) {
        prop_assume!(!(hollow && n < 3));
        let labels = symmetric_vertices(n, hollow).unwrap();
        let total: i64 = weights[..labels.len()].iter().sum();
        prop_assume!(total > 0);
        let mut m = Matrix::zeros(n, n).unwrap();
        for (label, &w) in labels.iter().zip(&weights) {
            m = &m + &generator(label).unwrap().scaled(&ratio(w, total));
        }
        prop_assert!(m.is_monge());
        let d = decompose_symmetric(&m, hollow).unwrap();
        prop_assert_eq!(d.coefficient_sum(), int(1));
        prop_assert_eq!(d.reconstruct(), m);
        for (label, &w) in labels.iter().zip(&weights) {
            let got = match label.block {
                Block::Nesw { a, b } => d.lambda(a, b).clone(),
                Block::Hv { i } => d.lambda_i[i - 1].clone(),
                _ => unreachable!(),
            };
            prop_assert_eq!(got, ratio(w, total));
        }
    }

    #[test]
    fn simplex_volume_invariances(coords in prop::collection::vec(-5i64..=5, 12), shift in prop::collection::vec(-5i64..=5, 3), scale in 1i64..4) {
        let pts: Vec<ChartPoint> = coords.chunks(3).map(|c| ChartPoint::new(c.iter().map(|&x| int(x)).collect())).collect();
        let Ok(v) = simplex_volume(&pts) else { return Ok(()); };
        let moved: Vec<ChartPoint> = pts.iter().rev().map(|pt| {
            ChartPoint::new(pt.coordinates.iter().zip(&shift).map(|(x, s)| x * int(scale) + int(*s)).collect())
        }).collect();
        prop_assert_eq!(simplex_volume(&moved).unwrap(), v * int(scale.pow(3)));
    }

    #[test]
    fn series_with_unit_part_is_nondecreasing(mut exps in prop::collection::vec(1u64..6, 0..6)) {
        exps.push(1);
        let f = coefficients(&SeriesSpec::new(vec![1], exps).unwrap(), 60);
        prop_assert!(f.iter().all(|x| x.sign() != num_bigint::Sign::Minus));
        prop_assert!(f.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn stanley_forms_round_trip(p in 1usize..=10, mask in any::<u64>(), strips in prop::collection::vec(0u64..5, 10), steps in prop::collection::vec(0u64..5, 10)) {
        let form = CanonicalForm {
            subset: ColumnSubset::from_mask(p, mask & ((1 << p) - 1)),
            strips: strips[..p].to_vec(),
            steps: steps[..p].to_vec(),
        };
        let m = reconstruct_of(&form);
        prop_assert!(m.is_monge());
        let grading = base_size(&form.subset)
            + 2 * form.strips.iter().sum::<u64>()
            + form.steps.iter().enumerate().map(|(j, b)| (j as u64 + 1) * b).sum::<u64>();
        prop_assert_eq!(m.sum(), grading);
        prop_assert_eq!(canonical_form_of(&m).unwrap(), form);
    }

    #[test]
    fn northwest_flow_is_feasible_and_scale_free(seed in any::<u64>(), p in 2usize..=5, q in 2usize..=5, num in 1i64..20, den in 1i64..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cost = random_monge(p, q, 4, &mut rng).unwrap();
        let supplies: Vec<u64> = (0..p).map(|i| (seed >> (i * 3)) % 5).collect();
        let total: u64 = supplies.iter().sum();
        let mut demands = vec![0u64; q];
        for k in 0..total {
            demands[(k as usize * 7 + seed as usize) % q] += 1;
        }
        let inst = TransportInstance::new(cost.clone(), supplies.clone(), demands.clone()).unwrap();
        let flow = northwest_corner(&inst).unwrap();
        prop_assert!(flow.is_feasible(&inst));
        let scaled = TransportInstance::new(cost.scaled(&ratio(num, den)), supplies, demands).unwrap();
        prop_assert_eq!(northwest_corner(&scaled).unwrap(), flow);
    }

    #[test]
    fn pyramidal_tour_is_scale_free(seed in any::<u64>(), n in 3usize..=8, num in 1i64..20, den in 1i64..20) {
        let cost = random_square_monge(n, 5, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let (tour, value) = pyramidal_tsp(&cost).unwrap();
        prop_assert!(tour.is_pyramidal());
        let factor = ratio(num, den);
        let (scaled_tour, scaled_value) = pyramidal_tsp(&cost.scaled(&factor)).unwrap();
        prop_assert_eq!(scaled_tour, tour);
        prop_assert_eq!(scaled_value, value * factor);
    }
}

#[test]
fn symmetric_vertex_counts() {
    for n in 2..=8 {
        assert_eq!(symmetric_vertices(n, true).unwrap().len(), n * (n - 1) / 2);
        assert_eq!(symmetric_vertices(n, false).unwrap().len(), n * (n + 1) / 2);
    }
}

#[test]
fn closure_is_idempotent_and_faces_are_closed() {
    let poly = GenericPolytope::new(3, 3).unwrap();
    let lat = face_lattice(3, 3).unwrap();
    for face in &lat.faces {
        if face.vertices.is_empty() {
            continue;
        }
        assert_eq!(poly.closure(face.vertices), face.vertices);
        assert_eq!(poly.face_dim(face.vertices).unwrap(), face.dim);
        for sub in poly.subfacets(face.vertices) {
            if !sub.is_empty() {
                assert_eq!(poly.face_dim(sub).unwrap(), face.dim - 1);
            }
        }
    }
}
