//! Exhaustive checks of the compiled template automata against the direct
//! scan-based oracle, plus the open-alphabet algebra properties: embedding
//! equals projection, products are intersections, and foreign activities
//! are invisible to everything except direct-succession constraints.

mod common;

use common::*;
use proptest::prelude::*;
use procframe::{Constraint, Dfa, Template, Trace, DEFAULT_STATE_CAP};

/// Every template with canonical arguments plus one foreign symbol to
/// enumerate over.
fn catalog() -> Vec<(Constraint, Vec<&'static str>)> {
    let binary: Vec<Template> = vec![
        Template::Response,
        Template::Precedence,
        Template::Succession,
        Template::AlternateResponse,
        Template::AlternatePrecedence,
        Template::AlternateSuccession,
        Template::CoExistence,
        Template::NotCoExistence,
        Template::NotSuccession,
        Template::NotChainSuccession,
    ];
    let mut out = Vec::new();
    for t in [
        Template::Existence(1),
        Template::Existence(2),
        Template::Absence(2),
        Template::Absence(3),
        Template::Exactly(1),
        Template::Exactly(2),
        Template::Init,
    ] {
        out.push((con(t, &["A"]), vec!["A", "z"]));
    }
    for t in binary {
        out.push((con(t, &["A", "B"]), vec!["A", "B", "z"]));
    }
    out.push((
        con(Template::NotChainSuccession, &["A", "A"]),
        vec!["A", "z"],
    ));
    for t in [Template::Interposition, Template::BalancedEnablement] {
        out.push((con(t, &["A", "B", "C"]), vec!["A", "B", "C", "z"]));
    }
    out
}

#[test]
fn compiled_templates_agree_with_the_oracle() {
    for (constraint, symbols) in catalog() {
        let dfa = constraint.compile();
        for trace in all_traces(&symbols, 6) {
            assert_eq!(
                dfa.accepts(&trace),
                oracle::holds(&constraint, &trace),
                "{constraint} disagrees with the oracle on {trace}"
            );
        }
    }
}

#[test]
fn evaluation_status_matches_acceptance_and_activations() {
    for (constraint, symbols) in catalog() {
        let dfa = constraint.compile();
        for trace in all_traces(&symbols, 4) {
            let result = constraint.evaluate(&trace);
            assert_eq!(!result.is_violated(), dfa.accepts(&trace), "{constraint} on {trace}");
            assert_eq!(result.activations, constraint.activations(&trace));
            if result.status == procframe::ConstraintStatus::VacuouslySatisfied {
                assert_eq!(result.activations, 0);
            }
        }
    }
}

#[test]
fn embedding_realizes_projection() {
    // embed(d, Σ') accepts ρ iff d accepts ρ|Σ' — for every template whose
    // defaults are projection self-loops (all except the chain family and
    // the first-event template).
    for (constraint, _) in catalog() {
        if constraint.template().is_chain_family() || constraint.template() == Template::Init {
            continue;
        }
        let dfa = constraint.compile();
        let local = set(&["A", "B", "C", "w"]);
        let embedded = dfa.embed(&local).unwrap();
        for trace in all_traces(&["A", "B", "w", "z"], 6) {
            assert_eq!(
                embedded.accepts(&trace),
                dfa.accepts(&trace.project(&local)),
                "{constraint} embedding differs on {trace}"
            );
        }
    }
}

#[test]
fn chain_defaults_are_not_projection_self_loops() {
    // an in-alphabet activity breaks the direct succession, a foreign one
    // does not
    let ncs = con(Template::NotChainSuccession, &["A", "B"]);
    let over_abc = ncs.compile().embed(&set(&["A", "B", "C"])).unwrap();
    assert!(over_abc.accepts(&tr(&["A", "C", "B"])));
    let over_ab = ncs.compile().embed(&set(&["A", "B"])).unwrap();
    assert!(!over_ab.accepts(&tr(&["A", "C", "B"])));
}

#[test]
fn foreign_symbol_transparency() {
    // inserting a foreign activity anywhere never changes acceptance, for
    // every template except direct succession (chain family) and the
    // first-event template
    let foreign = act("zz");
    for (constraint, symbols) in catalog() {
        if constraint.template().is_chain_family() || constraint.template() == Template::Init {
            continue;
        }
        let dfa = constraint.compile();
        for trace in all_traces(&symbols, 4) {
            let base = dfa.accepts(&trace);
            for pos in 0..=trace.len() {
                let mut events: Vec<_> = trace.events().to_vec();
                events.insert(pos, foreign.clone());
                assert_eq!(
                    dfa.accepts(&Trace::new(events)),
                    base,
                    "{constraint}: foreign insertion changed acceptance of {trace}"
                );
            }
        }
    }
}

#[test]
fn not_chain_succession_foreign_insertion_repairs_adjacency() {
    let ncs = con(Template::NotChainSuccession, &["A", "B"]).compile();
    assert!(!ncs.accepts(&tr(&["A", "B"])));
    assert!(ncs.accepts(&tr(&["A", "zz", "B"])));
}

#[test]
fn product_is_intersection_exhaustively() {
    let d1 = con(Template::Response, &["A", "B"]).compile();
    let d2 = con(Template::NotChainSuccession, &["B", "C"]).compile();
    let p = Dfa::product(&[&d1, &d2], DEFAULT_STATE_CAP).unwrap();
    for trace in all_traces(&["A", "B", "C", "w"], 6) {
        assert_eq!(
            p.accepts(&trace),
            d1.accepts(&trace) && d2.accepts(&trace),
            "product differs on {trace}"
        );
    }
}

#[test]
fn succession_product_matches_reference() {
    // intersection of Response and Precedence equals Succession, checked
    // both by the equivalence routine and by exhaustive enumeration
    let resp = con(Template::Response, &["A", "B"]).compile();
    let prec = con(Template::Precedence, &["A", "B"]).compile();
    let succ = con(Template::Succession, &["A", "B"]).compile();
    let p = Dfa::product(&[&resp, &prec], DEFAULT_STATE_CAP).unwrap();
    assert!(p.equivalent(&succ));
    for trace in all_traces(&["A", "B", "z"], 5) {
        assert_eq!(p.accepts(&trace), succ.accepts(&trace));
    }
}

#[test]
fn succession_with_alternate_response_cross_product() {
    // the loop-start combination: strict response discipline on top of
    // co-occurrence, verified by enumeration against the two oracles
    let succ = con(Template::Succession, &["A", "B"]);
    let alt = con(Template::AlternateResponse, &["A", "B"]);
    let p = Dfa::product(&[&succ.compile(), &alt.compile()], DEFAULT_STATE_CAP).unwrap();
    for trace in all_traces(&["A", "B"], 5) {
        assert_eq!(
            p.accepts(&trace),
            oracle::holds(&succ, &trace) && oracle::holds(&alt, &trace),
            "combination differs on {trace}"
        );
    }
}

#[test]
fn minimize_finds_the_nerode_classes() {
    // Response has two live states: obligation pending or not
    let resp = con(Template::Response, &["A", "B"]).compile();
    assert_eq!(resp.state_count(), 2);
    // idempotent conjunction stays the same automaton
    let twice = Dfa::product(&[&resp, &resp], DEFAULT_STATE_CAP)
        .unwrap()
        .minimized();
    assert_eq!(twice, resp.minimized());
}

#[test]
fn not_co_existence_rendering() {
    let dfa = con(Template::NotCoExistence, &["A", "B"]).compile();
    let dot = dfa.to_dot(true);
    // three visible states once the trap is hidden
    assert_eq!(dot.matches("[shape=").count() - 1, 3, "{dot}");
    assert!(dfa.complement().accepts(&tr(&["A", "B"])));
}

proptest! {
    #[test]
    fn projection_idempotent_and_monotone(
        raw in proptest::collection::vec(0u8..4, 0..20),
        mask in proptest::collection::vec(proptest::bool::ANY, 4)
    ) {
        let names = ["a", "b", "c", "d"];
        let trace: Trace = raw.iter().map(|&i| act(names[i as usize])).collect();
        let alphabet: procframe::ActivitySet = names
            .iter()
            .zip(&mask)
            .filter(|(_, keep)| **keep)
            .map(|(n, _)| act(n))
            .collect();
        let once = trace.project(&alphabet);
        prop_assert_eq!(once.project(&alphabet), once.clone());
        prop_assert!(once.len() <= trace.len());
        let full: procframe::ActivitySet = names.iter().map(|n| act(n)).collect();
        prop_assert_eq!(trace.project(&full), trace);
    }

    #[test]
    fn minimization_preserves_acceptance(
        raw in proptest::collection::vec(0u8..3, 0..30)
    ) {
        let names = ["A", "B", "z"];
        let trace: Trace = raw.iter().map(|&i| act(names[i as usize])).collect();
        let d = Dfa::product(
            &[
                &con(Template::AlternateSuccession, &["A", "B"]).compile(),
                &con(Template::NotChainSuccession, &["A", "A"]).compile(),
            ],
            DEFAULT_STATE_CAP,
        )
        .unwrap();
        prop_assert_eq!(d.minimized().accepts(&trace), d.accepts(&trace));
    }

    #[test]
    fn enumerated_traces_are_all_accepted(k in 1usize..3) {
        let d = con(Template::AlternateSuccession, &["A", "B"]).compile();
        let traces = d.enumerate_traces(k);
        for t in &traces {
            prop_assert!(d.accepts(t));
        }
        let more = d.enumerate_traces(k + 1);
        for t in &traces {
            prop_assert!(more.contains(t));
        }
    }
}
