mod common;

use std::collections::BTreeSet;

use cdcl::{parse_dimacs, Lit, Var};
use cipherlock::benches::{b_class, c17, majority, majority_xor_locked};
use cipherlock::bits::Bits;
use cipherlock::ciphers::{
    build_unrolled_circuit, ciphertext_name, key_name, plaintext_name, reference_encrypt,
    sample_pattern_triple, CipherSpec,
};
use cipherlock::netlist::{GateKind, Netlist, WordSimulator};
use cipherlock::sat::{
    build_miter, check_equivalence, solve, tseitin_encode, CnfFormula, Equivalence, KeyBinding,
    SolveBudget, SolveStatus,
};
use common::{build, pattern_bits, shape, truth_table, Shape};
use proptest::prelude::*;

fn net_lit(f: &CnfFormula, name: &str, value: bool) -> Lit {
    f.var_of(name).unwrap().lit(value)
}

fn pin_bound(n: &Netlist) -> usize {
    let pins: usize = n.gates().iter().map(|g| g.inputs.len()).sum();
    let consts = n.gates().iter().filter(|g| g.kind.is_const()).count();
    4 * pins + consts
}

/// The same shape with gate `at` switched to another kind of equal arity class.
fn mutate(s: &Shape, at: usize, to: usize) -> Shape {
    let mut t = s.clone();
    let i = at % t.gates.len();
    let from = GateKind::ALL[t.gates[i].0];
    let pool: &[GateKind] = match from {
        GateKind::Not | GateKind::Buf => &[GateKind::Not, GateKind::Buf],
        GateKind::Const0 | GateKind::Const1 => &[GateKind::Const0, GateKind::Const1],
        GateKind::Mux2 => &[GateKind::Mux2],
        _ => &[
            GateKind::And,
            GateKind::Nand,
            GateKind::Or,
            GateKind::Nor,
            GateKind::Xor,
            GateKind::Xnor,
        ],
    };
    let kind = pool[to % pool.len()];
    t.gates[i].0 = GateKind::ALL.iter().position(|&k| k == kind).unwrap();
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn assumptions_reproduce_simulation(s in shape(8, 3, 40), pattern in any::<u32>()) {
        let n = build(&s);
        let f = tseitin_encode(&n);
        let sources: Vec<_> = n.inputs().iter().chain(n.keys()).copied().collect();
        let values = pattern_bits(pattern as usize, sources.len());
        let assume: Vec<Lit> = sources
            .iter()
            .zip(&values)
            .map(|(&src, &v)| net_lit(&f, n.name(src), v))
            .collect();
        let (pi, keys) = values.split_at(n.inputs().len());
        let expect = WordSimulator::new(&n).eval_bits(pi, keys).unwrap();

        let out = solve(&f, &assume, &SolveBudget::unlimited()).unwrap();
        prop_assert_eq!(out.status, SolveStatus::Satisfiable);
        let model = out.model.unwrap();
        prop_assert!(f.satisfied_by(&model).is_ok());
        for (&o, &e) in n.outputs().iter().zip(&expect) {
            prop_assert_eq!(model[f.var_of(n.name(o)).unwrap().index()], e);
        }
        // forcing any output to the opposite value contradicts the inputs
        let o = n.outputs()[0];
        let mut wrong = assume.clone();
        wrong.push(net_lit(&f, n.name(o), !expect[0]));
        prop_assert_eq!(solve(&f, &wrong, &SolveBudget::unlimited()).unwrap().status, SolveStatus::Unsatisfiable);
    }

    #[test]
    fn equivalence_agrees_with_exhaustive_simulation(
        s in shape(10, 0, 30),
        at in any::<usize>(),
        to in any::<usize>(),
    ) {
        let a = build(&s);
        let b = build(&mutate(&s, at, to));
        let (ta, tb) = (truth_table(&a, &[]), truth_table(&b, &[]));
        match check_equivalence(&a, &b, None).unwrap() {
            Equivalence::Equivalent => prop_assert_eq!(ta, tb),
            Equivalence::Counterexample(c) => {
                prop_assert_ne!(&ta, &tb);
                let p: usize = c.inputs.iter().enumerate().map(|(i, &v)| (v as usize) << i).sum();
                prop_assert_ne!(&ta[p], &tb[p]);
                prop_assert_eq!(&c.outputs_a, &ta[p]);
                prop_assert_eq!(&c.outputs_b, &tb[p]);
            }
            Equivalence::Inconclusive => prop_assert!(false, "unlimited budget"),
        }
    }

    #[test]
    fn clause_count_is_linear_in_pins(s in shape(8, 3, 60)) {
        let n = build(&s);
        let f = tseitin_encode(&n);
        prop_assert!(f.clauses.len() <= pin_bound(&n));
        prop_assert!(f.num_vars >= n.num_nets());
    }

    #[test]
    fn dimacs_text_round_trips(s in shape(8, 3, 40)) {
        let f = tseitin_encode(&build(&s));
        let back = parse_dimacs(&f.to_dimacs()).unwrap();
        prop_assert_eq!(back.num_vars, f.num_vars);
        prop_assert_eq!(back.clauses, f.clauses);
    }
}

#[test]
fn majority_output_true_has_four_models() {
    let n = majority();
    let mut f = tseitin_encode(&n);
    f.clauses.push(vec![net_lit(&f, n.name(n.outputs()[0]), true)]);
    let pis: Vec<Var> = n.inputs().iter().map(|&i| f.var_of(n.name(i)).unwrap()).collect();
    let mut found = BTreeSet::new();
    loop {
        let out = solve(&f, &[], &SolveBudget::unlimited()).unwrap();
        if out.status == SolveStatus::Unsatisfiable {
            break;
        }
        let model = out.model.unwrap();
        let values: Vec<bool> = pis.iter().map(|v| model[v.index()]).collect();
        assert!(found.insert(values.clone()), "model repeated");
        f.clauses.push(pis.iter().zip(&values).map(|(v, &b)| v.lit(!b)).collect());
    }
    let expected: BTreeSet<Vec<bool>> = (0..8)
        .map(|p| pattern_bits(p, 3))
        .filter(|v| v.iter().filter(|&&b| b).count() >= 2)
        .collect();
    assert_eq!(found, expected);
}

#[test]
fn benchmark_encodings_stay_within_the_pin_bound() {
    for n in [c17(), majority_xor_locked(), b_class(0), b_class(3)] {
        let f = tseitin_encode(&n);
        assert!(f.clauses.len() <= pin_bound(&n));
    }
    let cipher = build_unrolled_circuit(&CipherSpec::SIMON_32_64);
    assert!(tseitin_encode(&cipher).clauses.len() <= pin_bound(&cipher));
}

#[test]
fn variable_map_lists_every_net_one_based() {
    let n = majority();
    let f = tseitin_encode(&n);
    let text = f.var_map_text();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), n.num_nets());
    for id in n.net_ids() {
        assert!(lines.contains(&format!("{} {}", n.name(id), id.index() + 1).as_str()));
    }
}

#[test]
fn locked_majority_miter_depends_on_the_key() {
    let (orig, locked) = (majority(), majority_xor_locked());
    let right = build_miter(&orig, &locked, &KeyBinding::Free, &KeyBinding::Fixed(vec![true, false])).unwrap();
    let r = solve(&right.formula, &[], &SolveBudget::unlimited()).unwrap();
    assert_eq!(r.status, SolveStatus::Unsatisfiable);

    let wrong = build_miter(&orig, &locked, &KeyBinding::Free, &KeyBinding::Fixed(vec![false, false])).unwrap();
    let w = solve(&wrong.formula, &[], &SolveBudget::unlimited()).unwrap();
    assert_eq!(w.status, SolveStatus::Satisfiable);

    match check_equivalence(&orig, &locked, Some(&[false, false])).unwrap() {
        Equivalence::Counterexample(c) => {
            let a = WordSimulator::new(&orig).eval_bits(&c.inputs, &[]).unwrap();
            let b = WordSimulator::new(&locked).eval_bits(&c.inputs, &[false, false]).unwrap();
            assert_ne!(a, b);
            assert_eq!((c.outputs_a, c.outputs_b), (a, b));
        }
        other => panic!("expected a counterexample, got {other:?}"),
    }
    assert!(check_equivalence(&orig, &locked, Some(&[true, false])).unwrap().is_equivalent());
    assert!(matches!(check_equivalence(&orig, &locked, None).unwrap(), Equivalence::Counterexample(_)));
}

#[test]
fn reduced_round_simon_key_follows_from_one_pair() {
    let spec = CipherSpec::SIMON_32_64.reduced(4).unwrap();
    let n = build_unrolled_circuit(&spec);
    let f = tseitin_encode(&n);
    let t = sample_pattern_triple(&spec, 5);
    let mut assume: Vec<Lit> = (0..spec.block_size())
        .map(|i| net_lit(&f, &plaintext_name(i), t.x.get(i)))
        .collect();
    assume.extend((0..spec.block_size()).map(|i| net_lit(&f, &ciphertext_name(i), t.y.get(i))));
    let out = solve(&f, &assume, &SolveBudget::unlimited()).unwrap();
    assert_eq!(out.status, SolveStatus::Satisfiable);
    let model = out.model.unwrap();
    let key = Bits::from_lsb_first(
        (0..spec.key_length())
            .map(|i| model[f.var_of(&key_name(i)).unwrap().index()])
            .collect(),
    );
    assert_eq!(reference_encrypt(&spec, &key, &t.x).unwrap(), t.y);
}

#[test]
fn exhausted_budget_is_reported_not_guessed() {
    let f = tseitin_encode(&majority());
    let out = solve(&f, &[], &SolveBudget::conflicts(0)).unwrap();
    assert_eq!(out.status, SolveStatus::ResourceLimit);
    assert!(out.model.is_none());
}
