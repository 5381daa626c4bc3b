//! Invariants of the data model, the formula syntax and enumeration order.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use spanex_core::compile::compile_regex;
use spanex_core::enumerate::enumerate;
use spanex_core::formula::{bounded_ref_language, check_functional_regex, parse_regex_formula};
use spanex_core::harness::oracle::{all_tuples, ref_words_for};
use spanex_core::harness::random::{arbitrary_formula, functional_formula, random_document};
use spanex_core::model::{
    clean, config_sequence_to_tuple, radix_key, ref_word_to_tuple, tuple_to_config_sequence, var,
    RefSymbol, RefWord, VarName,
};

const AB: &[char] = &['a', 'b'];

fn vars() -> Vec<VarName> {
    vec![var("x"), var("y")]
}

fn random_ref_word(rng: &mut StdRng, len: usize) -> RefWord {
    let vs = vars();
    RefWord::new(
        (0..len)
            .map(|_| match rng.gen_range(0..4) {
                0 => RefSymbol::Open(vs[rng.gen_range(0..2)].clone()),
                1 => RefSymbol::Close(vs[rng.gen_range(0..2)].clone()),
                _ => RefSymbol::Terminal(AB[rng.gen_range(0..2)]),
            })
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_formulas_parse_back(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = arbitrary_formula(&mut rng, &vars(), &['a', 'b', '{', '*', ' ', '/', 'Σ'], 5);
        let printed = f.to_string();
        prop_assert_eq!(parse_regex_formula(&printed).unwrap(), f, "{}", printed);
    }

    /// The structural test agrees with the definition: every ref-word of
    /// the formula is valid. Depth 3 keeps minimal counterexamples within
    /// the enumerated bound.
    #[test]
    fn functionality_matches_ref_words(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = arbitrary_formula(&mut rng, &vars(), AB, 3);
        let words = bounded_ref_language(&f, AB, 6, 8);
        let semantic = words.iter().all(|w| w.is_valid_for(&f.vars()));
        prop_assert_eq!(check_functional_regex(&f).is_ok(), semantic, "{}", f);
    }

    #[test]
    fn clean_is_a_morphism(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (n, m) = (rng.gen_range(0..8), rng.gen_range(0..8));
        let r1 = random_ref_word(&mut rng, n);
        let r2 = random_ref_word(&mut rng, m);
        prop_assert_eq!(
            clean(r1.concat(&r2).symbols()),
            clean(r1.symbols()) + &clean(r2.symbols())
        );
    }

    #[test]
    fn tuples_and_configuration_sequences_are_in_bijection(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let d = random_document(&mut rng, AB, 5);
        let vs: BTreeSet<VarName> = vars().into_iter().collect();
        let tuples = all_tuples(&vs, d.len());
        let t = &tuples[rng.gen_range(0..tuples.len())];
        let seq = tuple_to_config_sequence(t, &vs, d.len()).unwrap();
        prop_assert_eq!(seq.configs().len(), d.len() + 1);
        prop_assert_eq!(&config_sequence_to_tuple(&seq), t);
        // every ref-word denoting t cleans to d and maps back to t
        for w in ref_words_for(t, &d) {
            prop_assert_eq!(clean(w.symbols()), d.symbols().iter().collect::<String>());
            prop_assert_eq!(&ref_word_to_tuple(&w, &vs).unwrap(), t);
        }
    }

    /// Output is strictly increasing in radix order, hence duplicate-free.
    #[test]
    fn enumeration_is_strictly_radix_ordered(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let k = rng.gen_range(0..=2);
        let f = functional_formula(&mut rng, &vars()[..k], AB, 4);
        let a = compile_regex(&f).unwrap();
        let d = random_document(&mut rng, AB, 6);
        let keys: Vec<_> = enumerate(&a, &d).unwrap().map(|t| radix_key(&t, d.len())).collect();
        prop_assert!(keys.windows(2).all(|w| w[0] < w[1]), "{}", f);
    }
}
