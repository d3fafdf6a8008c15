use num_complex::Complex64;
use proptest::collection::vec;
use proptest::prelude::*;

use udg_core::analysis::{
    is_quadrangular, is_specular, sq_witness, DEFAULT_SQ_CAP,
};
use udg_core::digraph::Digraph;
use udg_core::euler::{
    euler_circuit, hamiltonian_cycle_in_line_digraph, verify_hamiltonian_cycle,
};
use udg_core::generate::random_degree_balanced;
use udg_core::matrix::{ComplexMatrix, Tolerances};
use udg_core::oracle::nearest_unitary;
use udg_core::pattern::Pattern;
use udg_core::perm::Permutation;
use udg_core::synthesis::{fourier_matrix, synthesize_coined, transport, CoinSet};
use udg_core::walk::{init_state, step, vertex_distribution, walk_operator, Grouping, StartMode};

fn arb_digraph(max_n: usize, max_m: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(move |n| {
        vec((0..n, 0..n), 0..=max_m)
            .prop_map(move |arcs| Digraph::new(n, arcs).expect("arcs are in range"))
    })
}

fn arb_pattern(max_n: usize) -> impl Strategy<Value = Pattern> {
    (1..=max_n).prop_flat_map(|n| {
        vec(any::<bool>(), n * n)
            .prop_map(move |bits| Pattern::new(n, bits).expect("length matches"))
    })
}

fn arb_permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|image| Permutation::new(image).expect("shuffle is a bijection"))
}

fn arb_pattern_with_perms(max_n: usize) -> impl Strategy<Value = (Pattern, Permutation, Permutation)> {
    (1..=max_n).prop_flat_map(|n| {
        (
            vec(any::<bool>(), n * n)
                .prop_map(move |bits| Pattern::new(n, bits).expect("length matches")),
            arb_permutation(n),
            arb_permutation(n),
        )
    })
}

fn arb_matrix(max_n: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        vec((-3.0..3.0f64, -3.0..3.0f64), n * n).prop_map(move |parts| {
            let entries = parts
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect();
            ComplexMatrix::from_entries(n, entries).expect("length matches")
        })
    })
}

proptest! {
    #[test]
    fn digraph_pattern_digraph_is_a_fixpoint(d in arb_digraph(5, 12)) {
        let p = d.pattern();
        let back = Digraph::from_pattern(&p);
        prop_assert_eq!(back.pattern(), p);
        // Multiplicities collapse, adjacency survives.
        for v in 0..d.vertex_count() {
            prop_assert_eq!(
                d.out_neighborhood(v).unwrap(),
                back.out_neighborhood(v).unwrap()
            );
        }
    }

    #[test]
    fn permuting_by_a_permutation_and_its_inverse_round_trips(
        (p, rho, kappa) in arb_pattern_with_perms(6)
    ) {
        let moved = p.permuted(&rho, &kappa).unwrap();
        let back = moved.permuted(&rho.inverse(), &kappa.inverse()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn complement_is_involutive(p in arb_pattern(6)) {
        prop_assert_eq!(p.complemented().complemented(), p.clone());
        prop_assert_eq!(
            p.count_ones() + p.complemented().count_ones(),
            p.size() * p.size()
        );
    }

    #[test]
    fn line_digraph_sizes_check_out(d in arb_digraph(5, 10)) {
        prop_assume!(d.arc_count() >= 1);
        let (line, labeling) = d.line_digraph().unwrap();
        prop_assert_eq!(line.vertex_count(), d.arc_count());
        prop_assert_eq!(labeling.len(), d.arc_count());
        let expected: usize = (0..d.vertex_count())
            .map(|v| {
                let deg = d.degrees(v).unwrap();
                deg.invalency * deg.outvalency
            })
            .sum();
        prop_assert_eq!(line.arc_count(), expected);
        prop_assert!(!line.has_parallel_arcs());
    }

    #[test]
    fn line_digraph_out_supports_are_equal_or_disjoint(d in arb_digraph(5, 10)) {
        prop_assume!(d.arc_count() >= 1);
        let (line, _) = d.line_digraph().unwrap();
        let m = line.vertex_count();
        for a in 0..m {
            for b in 0..m {
                let na = line.out_neighborhood(a).unwrap();
                let nb = line.out_neighborhood(b).unwrap();
                let inter = na.intersection(&nb).count();
                prop_assert!(
                    inter == 0 || na == nb,
                    "arcs {} and {} overlap without equality", a, b
                );
            }
        }
    }

    #[test]
    fn combinatorial_classes_are_permutation_invariant(
        (p, rho, kappa) in arb_pattern_with_perms(5)
    ) {
        prop_assume!(p.is_well_formed());
        let moved = p.permuted(&rho, &kappa).unwrap();
        prop_assert_eq!(
            is_quadrangular(&p).unwrap(),
            is_quadrangular(&moved).unwrap()
        );
        prop_assert_eq!(
            sq_witness(&p, DEFAULT_SQ_CAP).unwrap().is_none(),
            sq_witness(&moved, DEFAULT_SQ_CAP).unwrap().is_none()
        );
        prop_assert_eq!(is_specular(&p).unwrap(), is_specular(&moved).unwrap());
    }

    #[test]
    fn sq_witnesses_validate_and_decide_quadrangularity(p in arb_pattern(5)) {
        prop_assume!(p.is_well_formed());
        match sq_witness(&p, DEFAULT_SQ_CAP).unwrap() {
            Some(w) => {
                prop_assert!(w.validate(&p));
                // The witness is minimal, so a 2-element witness exists
                // exactly when the pattern is not quadrangular.
                prop_assert_eq!(is_quadrangular(&p).unwrap(), w.set.len() > 2);
            }
            None => prop_assert!(is_quadrangular(&p).unwrap()),
        }
    }

    #[test]
    fn transport_carries_support_and_unitarity(
        (p, rho, kappa) in arb_pattern_with_perms(5)
    ) {
        // Build some matrix with the pattern's support: Fourier masked.
        let n = p.size();
        let f = fourier_matrix(n).unwrap();
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if p.get(i, j) {
                    m.set(i, j, f.get(i, j));
                }
            }
        }
        let t = transport(&m, &rho, &kappa).unwrap();
        prop_assert_eq!(t.support(1e-12), p.permuted(&rho, &kappa).unwrap());
        let u = fourier_matrix(n).unwrap();
        let tu = transport(&u, &rho, &kappa).unwrap();
        prop_assert!(tu.unitarity_residual() < 1e-12);
    }

    #[test]
    fn polar_factor_is_unitary_and_positive(m in arb_matrix(5)) {
        match nearest_unitary(&m) {
            Ok(u) => {
                prop_assert!(u.unitarity_residual() <= 1e-11);
                let h = u.adjoint().mul(&m).unwrap();
                prop_assert!(h.max_abs_diff(&h.adjoint()) <= 1e-9);
                // Positive semidefiniteness along the coordinate directions
                // of a Hermitian matrix: nonnegative diagonal.
                for i in 0..h.n() {
                    prop_assert!(h.get(i, i).re >= -1e-9);
                }
            }
            Err(_) => {
                // Near-singular draws may be rejected; skip them.
                prop_assume!(false);
            }
        }
    }

    #[test]
    fn coined_synthesis_matches_balance(seed in 0u64..200, n in 1usize..6, extra in 0usize..8) {
        let d = random_degree_balanced(n, n + extra, seed).unwrap();
        let tols = Tolerances::default();
        let (cert, _) = synthesize_coined(&d, &CoinSet::fourier(), &tols).unwrap();
        prop_assert!(cert.is_valid(&tols));
        let (line, _) = d.line_digraph().unwrap();
        prop_assert_eq!(cert.matrix.support(tols.zero_tol), line.pattern());
    }

    #[test]
    fn euler_circuits_lift_to_hamiltonian_cycles(seed in 0u64..200, n in 2usize..7, extra in 0usize..10) {
        let d = random_degree_balanced(n, n + extra, seed).unwrap();
        let circuit = euler_circuit(&d).unwrap();
        prop_assert_eq!(circuit.arcs.len(), d.arc_count());
        let mut sorted = circuit.arcs.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..d.arc_count()).collect::<Vec<_>>());
        for i in 0..circuit.arcs.len() {
            let a = d.arcs()[circuit.arcs[i]];
            let b = d.arcs()[circuit.arcs[(i + 1) % circuit.arcs.len()]];
            prop_assert_eq!(a.head, b.tail);
        }
        let cycle = hamiltonian_cycle_in_line_digraph(&d).unwrap();
        let (line, _) = d.line_digraph().unwrap();
        prop_assert!(verify_hamiltonian_cycle(&line, &cycle));
    }

    #[test]
    fn walks_preserve_norm_and_probability(seed in 0u64..100, n in 1usize..6, steps in 0usize..20) {
        let d = random_degree_balanced(n, n + 4, seed).unwrap();
        let tols = Tolerances::default();
        let (op, _) = walk_operator(&d, &CoinSet::fourier(), &tols).unwrap();
        let mut state = init_state(&d, StartMode::Uniform).unwrap();
        for _ in 0..steps {
            state = step(&op, &state).unwrap();
        }
        prop_assert!((state.norm() - 1.0).abs() < 1e-10);
        let head = vertex_distribution(&state, &d, Grouping::Head).unwrap();
        let tail = vertex_distribution(&state, &d, Grouping::Tail).unwrap();
        let sum_head: f64 = head.probabilities.iter().sum();
        let sum_tail: f64 = tail.probabilities.iter().sum();
        prop_assert!((sum_head - 1.0).abs() < 1e-10);
        prop_assert!((sum_tail - 1.0).abs() < 1e-10);
    }
}
