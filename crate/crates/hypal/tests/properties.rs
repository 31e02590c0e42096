#![allow(clippy::needless_range_loop)]

//! Cross-module algebraic properties on the fixture corpus, and a
//! brute-force vertex-enumeration oracle for the exact LP solver.

use num::{One, Signed, Zero};
use proptest::prelude::*;

use hypal::algebra::{integrate, FunctionOnH, Measure};
use hypal::corpus::{self, Expectation};
use hypal::haar::{
    action_matrix, all_action_matrices, build_k, check_left_invariance, ppt_check, ActionMatrix,
};
use hypal::hypergroup::ConvolutionTable;
use hypal::lp::{Direction, LinearProgram, LpOutcome, Relation};
use hypal::rational::{rat, rat_int, Rational};
use hypal::sample;

fn positive_fixtures() -> Vec<(ConvolutionTable, Vec<Rational>)> {
    corpus::golden_suite()
        .into_iter()
        .filter_map(|entry| match entry.expectation {
            Expectation::Valid { haar, .. } => Some((entry.table, haar)),
            Expectation::Invalid { .. } => None,
        })
        .collect()
}

// ---------------------------------------------------------------------------
// deterministic seeded property loops over the corpus
// ---------------------------------------------------------------------------

fn is_commutative(table: &ConvolutionTable) -> bool {
    let n = table.len();
    (0..n).all(|x| (0..n).all(|y| table.conv_row(x, y) == table.conv_row(y, x)))
}

#[test]
fn associativity_transfers_to_measure_translates() {
    // the pointwise translate composes contravariantly:
    // (μ∗ν)∗f = ν∗(μ∗f), which collapses to the two-sided module law on
    // commutative tables (every fixture except the S3 group table)
    for (table, _) in positive_fixtures() {
        let n = table.len();
        let measures = sample::random_signed_measures(n, 6, 11);
        let functions = sample::random_positive_functions(n, 3, 12);
        for pair in measures.chunks(2) {
            let [mu, nu] = pair else { continue };
            for f in &functions {
                let left = table.translate(&table.convolve_measures(mu, nu), f);
                let right = table.translate(nu, &table.translate(mu, f));
                assert_eq!(left, right, "{}", table.name());
                if is_commutative(&table) {
                    let module = table.translate(mu, &table.translate(nu, f));
                    assert_eq!(left, module, "{}", table.name());
                }
            }
        }
    }
}

#[test]
fn involution_reverses_convolution() {
    for (table, _) in positive_fixtures() {
        let n = table.len();
        // on point masses: (δ_x∗δ_y)ˇ = δ_y̌∗δ_x̌, all pairs
        for x in 0..n {
            for y in 0..n {
                let left = table.involute_measure(&table.convolve_points(x, y));
                let right = table.convolve_points(table.involute(y), table.involute(x));
                assert_eq!(left, right, "{} at ({x},{y})", table.name());
            }
        }
        // and bilinearly on random signed measures
        let measures = sample::random_signed_measures(n, 6, 21);
        for pair in measures.chunks(2) {
            let [mu, nu] = pair else { continue };
            let left = table.involute_measure(&table.convolve_measures(mu, nu));
            let right =
                table.convolve_measures(&table.involute_measure(nu), &table.involute_measure(mu));
            assert_eq!(left, right, "{}", table.name());
        }
    }
}

#[test]
fn nullspace_haar_is_independent_of_the_test_function() {
    use hypal::haar::{fixed_point_haar, CesaroOptions, HaarMethod, Normalization};
    for (table, expected) in positive_fixtures() {
        let n = table.len();
        let mut fs = sample::random_positive_functions(n, 4, 71);
        fs.push(FunctionOnH::constant(n, Rational::one()));
        for f in fs {
            let result =
                fixed_point_haar(&table, &f, HaarMethod::Nullspace, CesaroOptions::default())
                    .unwrap();
            assert_eq!(result.normalization, Normalization::IdentityOne);
            assert_eq!(
                result.weights.weights(),
                &expected[..],
                "{}: Haar must not depend on f",
                table.name()
            );
        }
    }
}

#[test]
fn norm_is_multiplicative_on_positive_measures() {
    for (table, _) in positive_fixtures() {
        let n = table.len();
        for mu in sample::random_signed_measures(n, 4, 31) {
            let (mu, _) = mu.jordan();
            for nu in sample::random_signed_measures(n, 4, 32) {
                let (nu, _) = nu.jordan();
                let product = table.convolve_measures(&mu, &nu);
                assert!(product.is_positive());
                assert_eq!(product.norm(), mu.norm() * nu.norm(), "{}", table.name());
                assert_eq!(product.total(), mu.total() * nu.total());
            }
        }
    }
}

#[test]
fn adjoint_identity_connects_translates_and_actions() {
    // ⟨w, δ_x∗f⟩ = ⟨A_x w, f⟩ for every element on every fixture
    for (table, _) in positive_fixtures() {
        let n = table.len();
        let weights = sample::random_signed_measures(n, 3, 41);
        let functions = sample::random_positive_functions(n, 3, 42);
        for w in &weights {
            for f in &functions {
                for x in 0..n {
                    let lhs = integrate(w, &table.translate_point(x, f));
                    let action = action_matrix(&table, x);
                    let rhs = integrate(&Measure::new(action.apply(w.weights())), f);
                    assert_eq!(lhs, rhs, "{} at x={x}", table.name());
                }
            }
        }
    }
}

#[test]
fn haar_integral_identity_on_corpus() {
    // ⟨λ, μ∗f⟩ = μ(H)·⟨λ, f⟩ with λ the fixture's Haar weights
    for (table, haar) in positive_fixtures() {
        let n = table.len();
        let lambda = Measure::new(haar);
        assert!(check_left_invariance(&table, &lambda).invariant);
        let measures = sample::random_signed_measures(n, 4, 51);
        let functions = sample::random_positive_functions(n, 2, 52);
        for mu in &measures {
            for f in &functions {
                let lhs = integrate(&lambda, &table.translate(mu, f));
                let rhs = mu.total() * integrate(&lambda, f);
                assert_eq!(lhs, rhs, "{}", table.name());
            }
        }
    }
}

#[test]
fn action_matrices_compose_along_the_convolution() {
    // A_x · A_y = Σ_t c[x][y][t] · A_t, exactly, for all pairs
    for (table, _) in positive_fixtures() {
        let n = table.len();
        let actions = all_action_matrices(&table);
        for x in 0..n {
            for y in 0..n {
                let composed = actions[x].compose(&actions[y]);
                let mut mixture = vec![Rational::zero(); n * n];
                for t in 0..n {
                    let weight = table.conv(x, y, t);
                    if weight.is_zero() {
                        continue;
                    }
                    for z in 0..n {
                        for u in 0..n {
                            mixture[z * n + u] += weight * actions[t].entry(z, u);
                        }
                    }
                }
                assert_eq!(composed, mixture, "{} at ({x},{y})", table.name());
            }
        }
    }
}

#[test]
fn identity_action_is_the_identity_matrix() {
    for (table, _) in positive_fixtures() {
        let a_e = action_matrix(&table, ConvolutionTable::IDENTITY);
        for z in 0..table.len() {
            for y in 0..table.len() {
                let expected = if z == y {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                assert_eq!(*a_e.entry(z, y), expected, "{}", table.name());
            }
        }
    }
}

#[test]
fn actions_preserve_k_exactly() {
    // with f ≡ 1, K is the probability simplex; translation must fix it
    for (table, _) in positive_fixtures() {
        let n = table.len();
        let one = FunctionOnH::constant(n, Rational::one());
        let k = build_k(&table, &one).unwrap();
        let actions = all_action_matrices(&table);
        for w in sample::random_simplex_points(n, 25, 61) {
            assert!(k.contains(&w), "{}", table.name());
            for a in &actions {
                let moved = Measure::new(a.apply(w.weights()));
                assert!(k.contains(&moved), "{} at x={}", table.name(), a.element());
            }
        }
    }
}

#[test]
fn averaged_operator_is_column_stochastic_and_cesaro_stays_in_k() {
    for (table, _) in positive_fixtures() {
        let n = table.len();
        let actions = all_action_matrices(&table);
        // P = (1/n) Σ_x A_x, exactly
        let apply_p = |w: &Measure| -> Measure {
            let mut acc = Measure::zero(n);
            for a in &actions {
                acc = acc.add(&Measure::new(a.apply(w.weights())));
            }
            acc.scaled(&rat(1, n as i64))
        };
        for y in 0..n {
            let column = apply_p(&Measure::point_mass(n, y));
            assert!(column.is_positive());
            assert!(column.total().is_one(), "{}", table.name());
        }
        // exact Cesàro averages of the iteration remain in K
        let one = FunctionOnH::constant(n, Rational::one());
        let k = build_k(&table, &one).unwrap();
        let mut current = Measure::point_mass(n, n - 1);
        let mut sum = current.clone();
        for steps in 1..=12u64 {
            let average = sum.scaled(&rat(1, steps as i64));
            assert!(k.contains(&average), "{} at step {steps}", table.name());
            current = apply_p(&current);
            sum = sum.add(&current);
        }
    }
}

// ---------------------------------------------------------------------------
// the ppt decision against an independent vertex-enumeration oracle
// ---------------------------------------------------------------------------

/// Exact solution of a square linear system, or `None` when singular.
fn solve_square(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = rhs.len();
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut b: Vec<Rational> = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let scale = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &scale;
        }
        b[col] /= &scale;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
                let delta = &factor * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some(b)
}

fn combinations(pool: usize, pick: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn recurse(
        start: usize,
        pool: usize,
        pick: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == pick {
            out.push(current.clone());
            return;
        }
        for i in start..pool {
            current.push(i);
            recurse(i + 1, pool, pick, current, out);
            current.pop();
        }
    }
    recurse(0, pool, pick, &mut current, &mut out);
    out
}

fn point_feasible(lp: &LinearProgram, point: &[Rational]) -> bool {
    for (j, x) in point.iter().enumerate() {
        if !lp.free[j] && x.is_negative() {
            return false;
        }
    }
    lp.constraints.iter().all(|con| {
        let activity: Rational = con.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
        match con.relation {
            Relation::Le => activity <= con.rhs,
            Relation::Eq => activity == con.rhs,
            Relation::Ge => activity >= con.rhs,
        }
    })
}

/// Best objective over all vertices of a bounded feasible region, found
/// by enumerating square subsystems of active constraints. `None` means
/// no feasible vertex, i.e. (for bounded regions) infeasible.
fn brute_force_optimum(lp: &LinearProgram) -> Option<Rational> {
    let n = lp.num_vars();
    // candidate active hyperplanes: every constraint as an equality, plus
    // the coordinate planes of sign-constrained variables
    let mut planes: Vec<(Vec<Rational>, Rational)> = lp
        .constraints
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs.clone()))
        .collect();
    for j in 0..n {
        if !lp.free[j] {
            let mut coeffs = vec![Rational::zero(); n];
            coeffs[j] = Rational::one();
            planes.push((coeffs, Rational::zero()));
        }
    }
    let mut best: Option<Rational> = None;
    for combo in combinations(planes.len(), n) {
        let rows: Vec<Vec<Rational>> = combo.iter().map(|&i| planes[i].0.clone()).collect();
        let rhs: Vec<Rational> = combo.iter().map(|&i| planes[i].1.clone()).collect();
        let Some(point) = solve_square(&rows, &rhs) else {
            continue;
        };
        if !point_feasible(lp, &point) {
            continue;
        }
        let value: Rational = lp.objective.iter().zip(&point).map(|(c, x)| c * x).sum();
        best = Some(match best {
            None => value,
            Some(current) => match lp.direction {
                Direction::Maximize => current.max(value),
                Direction::Minimize => current.min(value),
            },
        });
    }
    best
}

#[test]
fn ppt_lp_on_z2_matches_vertex_enumeration() {
    // the decision program for Z2 with f = indicator{a}, spelled out:
    // maximize (p_e+p_a) − (q_e+q_a) with (ρ∗f)(y) ≤ 0 and Σ(p+q) ≤ 1
    let z2 = corpus::gen_group(&corpus::z(2));
    let f = FunctionOnH::indicator(2, 1);
    let translates: Vec<FunctionOnH> = (0..2).map(|x| z2.translate_point(x, &f)).collect();
    let mut lp = LinearProgram::new(
        Direction::Maximize,
        vec![rat_int(1), rat_int(1), rat_int(-1), rat_int(-1)],
    );
    for y in 0..2 {
        lp.constrain(
            vec![
                translates[0].value(y).clone(),
                translates[1].value(y).clone(),
                -translates[0].value(y).clone(),
                -translates[1].value(y).clone(),
            ],
            Relation::Le,
            Rational::zero(),
        );
    }
    lp.constrain(vec![rat_int(1); 4], Relation::Le, rat_int(1));

    assert_eq!(brute_force_optimum(&lp), Some(Rational::zero()));
    let LpOutcome::Optimal { value, .. } = lp.solve().unwrap() else {
        panic!("ppt program is bounded and feasible");
    };
    assert!(value.is_zero());
    assert!(ppt_check(&z2, &f).unwrap().holds());
}

// ---------------------------------------------------------------------------
// randomized LP cross-check and serialization round-trips
// ---------------------------------------------------------------------------

fn arb_rational(numer: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = Rational> {
    (numer, 1i64..=3).prop_map(|(p, q)| rat(p, q))
}

fn arb_bounded_lp() -> impl Strategy<Value = LinearProgram> {
    let dims = (1usize..=3, any::<bool>());
    dims.prop_flat_map(|(n, maximize)| {
        let objective = prop::collection::vec(arb_rational(-3..=3), n);
        let free = prop::collection::vec(any::<bool>(), n);
        let rows = prop::collection::vec(
            (
                prop::collection::vec(arb_rational(-3..=3), n),
                prop_oneof![Just(Relation::Le), Just(Relation::Eq), Just(Relation::Ge)],
                arb_rational(-4..=4),
            ),
            0..=3,
        );
        (objective, free, rows).prop_map(move |(objective, free, rows)| {
            let mut lp = LinearProgram::new(
                if maximize {
                    Direction::Maximize
                } else {
                    Direction::Minimize
                },
                objective,
            );
            lp.free = free.clone();
            for (coeffs, relation, rhs) in rows {
                lp.constrain(coeffs, relation, rhs);
            }
            // box every variable so the region is bounded and every
            // nonempty region has a vertex
            for j in 0..free.len() {
                let mut up = vec![Rational::zero(); free.len()];
                up[j] = Rational::one();
                lp.constrain(up.clone(), Relation::Le, rat_int(4));
                if free[j] {
                    lp.constrain(up, Relation::Ge, rat_int(-4));
                }
            }
            lp
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn simplex_agrees_with_vertex_enumeration(lp in arb_bounded_lp()) {
        let oracle = brute_force_optimum(&lp);
        match lp.solve().unwrap() {
            LpOutcome::Optimal { value, .. } => {
                prop_assert_eq!(oracle, Some(value));
            }
            LpOutcome::Infeasible { .. } => prop_assert_eq!(oracle, None),
            LpOutcome::Unbounded { .. } => {
                prop_assert!(false, "boxed instances cannot be unbounded");
            }
        }
    }

    #[test]
    fn jordan_round_trip(parts in prop::collection::vec((-20i64..=20, 1i64..=5), 1..6)) {
        let mu = Measure::new(parts.into_iter().map(|(p, q)| rat(p, q)).collect());
        let (pos, neg) = mu.jordan();
        prop_assert!(pos.is_positive() && neg.is_positive());
        prop_assert_eq!(pos.sub(&neg), mu.clone());
        prop_assert_eq!(pos.total() + neg.total(), mu.norm());
        // disjoint supports
        for (p, n) in pos.weights().iter().zip(neg.weights()) {
            prop_assert!(p.is_zero() || n.is_zero());
        }
    }

    #[test]
    fn order2_documents_round_trip(p in 0i64..=40, q in 1i64..=40) {
        // any α = p/q with p ≤ q gives a structurally valid table
        prop_assume!(p <= q);
        let table = corpus::order2_table(rat(p, q)).unwrap();
        let text = hypal::document::serialize_table(&table);
        let parsed = hypal::document::parse_document(&text).unwrap();
        prop_assert_eq!(parsed, table);
    }
}

// ---------------------------------------------------------------------------
// parallel/sequential agreement beyond the unit scale
// ---------------------------------------------------------------------------

#[test]
fn batched_ppt_matches_sequential_on_a_conjugacy_table() {
    use hypal::haar::{ppt_batch, ppt_batch_seq};
    let d4c = corpus::gen_conjugacy(&corpus::d4());
    let fs = sample::random_positive_functions(d4c.len(), 12, 0);
    let par = ppt_batch(&d4c, &fs).unwrap();
    let seq = ppt_batch_seq(&d4c, &fs).unwrap();
    assert_eq!(par, seq);
    assert!(par.iter().all(|v| v.holds()));
}

#[test]
fn action_matrix_batches_agree() {
    use hypal::haar::all_action_matrices_seq;
    for (table, _) in positive_fixtures() {
        let par: Vec<ActionMatrix> = all_action_matrices(&table);
        let seq: Vec<ActionMatrix> = all_action_matrices_seq(&table);
        assert_eq!(par, seq);
    }
}
