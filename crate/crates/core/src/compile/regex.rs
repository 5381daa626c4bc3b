use super::CompileError;
use crate::formula::{check_functional_regex, RegexFormula};
use crate::vsa::{Label, StateId, VSetAutomaton};

/// Thompson-style construction with `x{β}` read as `⊢x · β · ⊣x`.
/// The result is trimmed and has at most `2·|α|` states.
pub fn compile_regex(alpha: &RegexFormula) -> Result<VSetAutomaton, CompileError> {
    check_functional_regex(alpha).map_err(CompileError::NonFunctional)?;
    // the seed state is isolated and disappears when trimming
    let mut a = VSetAutomaton::with_states(alpha.vars(), 1, 0, 0);
    let (s, e) = build(&mut a, alpha);
    a.set_initial(s);
    a.set_final(e);
    Ok(a.trim())
}

fn build(a: &mut VSetAutomaton, f: &RegexFormula) -> (StateId, StateId) {
    use RegexFormula::*;
    let edge = |a: &mut VSetAutomaton, label: Label| {
        let s = a.add_state();
        let e = a.add_state();
        a.add_transition(s, label, e);
        (s, e)
    };
    match f {
        Empty => (a.add_state(), a.add_state()),
        Epsilon => edge(a, Label::Epsilon),
        Symbol(c) => edge(a, Label::Symbol(*c)),
        Wildcard => edge(a, Label::Any),
        Disjunction(l, r) => {
            let s = a.add_state();
            let (s1, e1) = build(a, l);
            let (s2, e2) = build(a, r);
            let e = a.add_state();
            a.add_transition(s, Label::Epsilon, s1);
            a.add_transition(s, Label::Epsilon, s2);
            a.add_transition(e1, Label::Epsilon, e);
            a.add_transition(e2, Label::Epsilon, e);
            (s, e)
        }
        Concatenation(l, r) => {
            let (s1, e1) = build(a, l);
            let (s2, e2) = build(a, r);
            a.add_transition(e1, Label::Epsilon, s2);
            (s1, e2)
        }
        Star(inner) => {
            let s = a.add_state();
            let (s1, e1) = build(a, inner);
            let e = a.add_state();
            a.add_transition(s, Label::Epsilon, s1);
            a.add_transition(s, Label::Epsilon, e);
            a.add_transition(e1, Label::Epsilon, s1);
            a.add_transition(e1, Label::Epsilon, e);
            (s, e)
        }
        Binding(x, inner) => {
            let s = a.add_state();
            let (s1, e1) = build(a, inner);
            let e = a.add_state();
            a.add_transition(s, Label::open(x.clone()), s1);
            a.add_transition(e1, Label::close(x.clone()), e);
            (s, e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_regex_formula;
    use crate::vsa::check_functional_vsa;

    fn compile(s: &str) -> VSetAutomaton {
        compile_regex(&parse_regex_formula(s).unwrap()).unwrap()
    }

    #[test]
    fn compiled_automata_are_functional() {
        for s in [
            "a* x{a*} a*",
            "Σ* x{Σ* y{Σ*} Σ*} Σ*",
            "(x{a} y{b}) | (y{b} x{a})",
            "ε",
        ] {
            let a = compile(s);
            assert!(check_functional_vsa(&a).is_ok(), "{s}");
            assert!(a.num_states() <= 2 * parse_regex_formula(s).unwrap().size() + 1);
        }
    }

    #[test]
    fn empty_formula_compiles_to_empty_language() {
        let a = compile("∅");
        assert!(a.is_empty_language());
        assert!(compile("a ∅ b").is_empty_language());
    }

    #[test]
    fn non_functional_rejected() {
        let f = parse_regex_formula("x{a} x{a}").unwrap();
        assert!(matches!(
            compile_regex(&f),
            Err(CompileError::NonFunctional(_))
        ));
    }
}
