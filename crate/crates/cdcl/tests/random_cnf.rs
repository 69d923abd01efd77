use cdcl::{parse_dimacs, write_dimacs, Budget, Cnf, Lit, SolveResult, Solver};
use proptest::prelude::*;

fn brute_force_sat(num_vars: usize, clauses: &[Vec<i32>], fixed: &[i32]) -> bool {
    (0u32..(1 << num_vars)).any(|m| {
        let val = |l: i32| {
            let bit = (m >> (l.unsigned_abs() - 1)) & 1 == 1;
            if l > 0 {
                bit
            } else {
                !bit
            }
        };
        fixed.iter().all(|&l| val(l)) && clauses.iter().all(|c| c.iter().any(|&l| val(l)))
    })
}

fn clause_strategy(num_vars: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec((1..=num_vars as i32, any::<bool>()), 1..4)
        .prop_map(|v| v.into_iter().map(|(x, s)| if s { x } else { -x }).collect())
}

fn to_lits(c: &[i32]) -> Vec<Lit> {
    c.iter().map(|&l| Lit::from_dimacs(l)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn agrees_with_brute_force(clauses in prop::collection::vec(clause_strategy(8), 0..40)) {
        let mut s = Solver::new();
        s.reserve_vars(8);
        for c in &clauses {
            s.add_clause(&to_lits(c));
        }
        let r = s.solve();
        let expected = brute_force_sat(8, &clauses, &[]);
        prop_assert_eq!(r == SolveResult::Sat, expected);
        if r == SolveResult::Sat {
            for c in &clauses {
                prop_assert!(c.iter().any(|&l| s.model_value(Lit::from_dimacs(l))));
            }
        }
    }

    #[test]
    fn incremental_assumptions_agree_with_brute_force(
        clauses in prop::collection::vec(clause_strategy(7), 0..30),
        extra in prop::collection::vec(clause_strategy(7), 0..10),
        assumptions in prop::collection::vec((1..=7i32, any::<bool>()), 0..4),
    ) {
        let assumptions: Vec<i32> = {
            let mut seen = std::collections::BTreeMap::new();
            for (v, s) in assumptions {
                seen.entry(v).or_insert(if s { v } else { -v });
            }
            seen.into_values().collect()
        };
        let mut s = Solver::new();
        s.reserve_vars(7);
        for c in &clauses {
            s.add_clause(&to_lits(c));
        }
        let r1 = s.solve_with(&to_lits(&assumptions), &Budget::unlimited());
        prop_assert_eq!(r1 == SolveResult::Sat, brute_force_sat(7, &clauses, &assumptions));
        if r1 == SolveResult::Unsat && !s.failed_assumptions().is_empty() {
            let failed: Vec<i32> = s.failed_assumptions().iter().map(|l| l.to_dimacs()).collect();
            prop_assert!(!brute_force_sat(7, &clauses, &failed));
        }
        for c in &extra {
            s.add_clause(&to_lits(c));
        }
        let mut all = clauses.clone();
        all.extend(extra.iter().cloned());
        let r2 = s.solve_with(&to_lits(&assumptions), &Budget::unlimited());
        prop_assert_eq!(r2 == SolveResult::Sat, brute_force_sat(7, &all, &assumptions));
        let r3 = s.solve();
        prop_assert_eq!(r3 == SolveResult::Sat, brute_force_sat(7, &all, &[]));
    }

    #[test]
    fn dimacs_round_trip(clauses in prop::collection::vec(clause_strategy(9), 0..20)) {
        let cnf = Cnf { num_vars: 9, clauses: clauses.iter().map(|c| to_lits(c)).collect() };
        let text = write_dimacs(&cnf);
        prop_assert_eq!(parse_dimacs(&text).unwrap(), cnf);
    }
}

/// Random 3-SAT near the phase transition; large enough to exercise restarts
/// and clause database reduction, checked against model validity.
#[test]
fn random_3sat_models_are_valid() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let n = 150;
    let mut sat = 0;
    for _ in 0..6 {
        let m = (n as f64 * 4.2) as usize;
        let clauses: Vec<Vec<i32>> = (0..m)
            .map(|_| {
                (0..3)
                    .map(|_| {
                        let v = rng.gen_range(1..=n as i32);
                        if rng.gen() {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect();
        let mut s = Solver::new();
        for c in &clauses {
            s.add_clause(&to_lits(c));
        }
        if s.solve() == SolveResult::Sat {
            sat += 1;
            for c in &clauses {
                assert!(c.iter().any(|&l| s.model_value(Lit::from_dimacs(l))));
            }
        }
    }
    assert!(sat > 0, "no satisfiable instance at ratio 4.2 over six draws");
}

#[test]
fn pigeonhole_seven_into_six_is_unsat() {
    let n = 6;
    let var = |i: i32, j: i32| i * n + j + 1;
    let mut s = Solver::new();
    for i in 0..=n {
        let c: Vec<i32> = (0..n).map(|j| var(i, j)).collect();
        s.add_clause(&to_lits(&c));
    }
    for j in 0..n {
        for a in 0..=n {
            for b in (a + 1)..=n {
                s.add_clause(&to_lits(&[-var(a, j), -var(b, j)]));
            }
        }
    }
    assert_eq!(s.solve(), SolveResult::Unsat);
    assert!(s.stats().conflicts > 0);
}
