use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use spanex_core::compile::{
    apply_selections, build_equality_automaton, compile_regex, expand_strict, join, project, union,
};
use spanex_core::enumerate::enumerate;
use spanex_core::harness::oracle::{
    oracle_enumerate_automaton, oracle_enumerate_formula, relational,
};
use spanex_core::harness::random::{functional_automaton, functional_formula, random_document};
use spanex_core::model::{var, Document, SpanRelation, VarName};
use spanex_core::vsa::{check_functional_vsa, VSetAutomaton};

const AB: &[char] = &['a', 'b'];

fn materialize(a: &VSetAutomaton, d: &Document) -> SpanRelation {
    let mut rel = SpanRelation::new(a.vars().clone());
    for t in enumerate(a, d).unwrap() {
        assert!(rel.insert(t).unwrap(), "duplicate tuple");
    }
    rel
}

#[test]
fn compiled_formulas_match_the_oracle() {
    let mut rng = StdRng::seed_from_u64(1);
    let vars = [var("x"), var("y")];
    for _ in 0..150 {
        let k = rng.gen_range(0..=2);
        let f = functional_formula(&mut rng, &vars[..k], AB, 4);
        let a = compile_regex(&f).unwrap();
        for _ in 0..3 {
            let d = random_document(&mut rng, AB, 5);
            let expected = oracle_enumerate_formula(&f, &d).unwrap();
            assert_eq!(materialize(&a, &d), expected, "{f} on {d:?}");
            assert_eq!(oracle_enumerate_automaton(&a, &d).unwrap(), expected, "{f}");
        }
    }
}

#[test]
fn random_automata_match_the_oracle() {
    let mut rng = StdRng::seed_from_u64(2);
    let vars: BTreeSet<VarName> = [var("x"), var("y")].into();
    for _ in 0..150 {
        let a = functional_automaton(&mut rng, &vars, AB, 6);
        for _ in 0..3 {
            let d = random_document(&mut rng, AB, 5);
            let expected = oracle_enumerate_automaton(&a, &d).unwrap();
            assert_eq!(materialize(&a, &d), expected, "{a} on {d:?}");
        }
    }
}

#[test]
fn algebra_matches_relational_operators() {
    let mut rng = StdRng::seed_from_u64(3);
    let pool = [var("x"), var("y"), var("z")];
    for _ in 0..100 {
        let pick = |rng: &mut StdRng| {
            let mut v: Vec<VarName> = pool.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
            v.truncate(2);
            v
        };
        let (v1, v2) = (pick(&mut rng), pick(&mut rng));
        let f1 = functional_formula(&mut rng, &v1, AB, 4);
        let f2 = functional_formula(&mut rng, &v2, AB, 4);
        let a1 = compile_regex(&f1).unwrap();
        let a2 = compile_regex(&f2).unwrap();
        let j = join(&a1, &a2).unwrap();
        assert!(check_functional_vsa(&j).is_ok());
        let x = expand_strict(&j);
        assert!(check_functional_vsa(&x).is_ok());
        for _ in 0..2 {
            let d = random_document(&mut rng, AB, 5);
            let r1 = materialize(&a1, &d);
            let r2 = materialize(&a2, &d);
            let expected = relational::join(&r1, &r2);
            assert_eq!(materialize(&j, &d), expected, "{f1} ⋈ {f2} on {d:?}");
            assert_eq!(materialize(&x, &d), expected, "strict {f1} ⋈ {f2}");
            assert_eq!(materialize(&join(&a2, &a1).unwrap(), &d), expected);

            let y: BTreeSet<VarName> = v1.iter().take(1).cloned().collect();
            let p = project(&a1, &y).unwrap();
            assert_eq!(materialize(&p, &d), relational::project(&r1, &y));

            let f3 = functional_formula(&mut rng, &v1, AB, 4);
            let a3 = compile_regex(&f3).unwrap();
            let u = union(&[a1.clone(), a3.clone()]).unwrap();
            assert_eq!(
                materialize(&u, &d),
                relational::union(&r1, &materialize(&a3, &d))
            );
        }
    }
}

#[test]
fn selections_match_the_filter() {
    let mut rng = StdRng::seed_from_u64(4);
    let pool = [var("x"), var("y"), var("z")];
    for _ in 0..100 {
        let k = rng.gen_range(2..=3);
        let f = functional_formula(&mut rng, &pool[..k], AB, 5);
        let a = compile_regex(&f).unwrap();
        let mut sel = vec![(pool[0].clone(), pool[1].clone())];
        if k == 3 && rng.gen_bool(0.5) {
            sel.push((pool[1].clone(), pool[2].clone()));
        }
        let d = random_document(&mut rng, AB, 5);
        let eq = build_equality_automaton(&d, &sel).unwrap();
        assert!(check_functional_vsa(&eq).is_ok());
        let s = apply_selections(&a, &sel, &d).unwrap();
        assert!(check_functional_vsa(&s).is_ok());
        let expected = relational::select_equal(&materialize(&a, &d), &sel, &d);
        assert_eq!(materialize(&s, &d), expected, "{f} with {sel:?} on {d:?}");
    }
}
