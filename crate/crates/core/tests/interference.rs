mod common;

use opacity_core::automata::F;
use opacity_core::interference::{check_ini, check_ini_decomposed, check_ini_direct, check_ni, failing_states, IniMethod};
use opacity_core::observation::{project_natural, project_orwellian};
use opacity_core::{fixtures, oracle, render_model, Lts, Word};

fn in_l(g: &Lts, w: &Word) -> bool {
    g.accepts(w, F).unwrap()
}

/// First word of L (up to `bound`, length-lexicographic) whose projection escapes L.
fn escaping_word(g: &Lts, bound: usize, project: impl Fn(&Word) -> Word) -> Option<Word> {
    oracle::enumerate_language(g, F, bound).unwrap().words.into_iter().find(|w| !in_l(g, &project(w)))
}

#[test]
fn direct_and_decomposed_agree() {
    let shape = common::Shape { max_downgrading: 2, always_down: false, ..common::SMALL };
    for (i, g) in common::systems(31, 300, shape).iter().enumerate() {
        let direct = check_ini_direct(g).unwrap();
        let decomposed = check_ini_decomposed(g).unwrap();
        assert_eq!(direct.holds, decomposed.holds, "instance {i}:\n{}", render_model(g));
        assert_eq!(decomposed.holds, failing_states(&decomposed).is_empty());
    }
}

#[test]
fn ini_without_downgrading_is_ni() {
    let shape = common::Shape { max_downgrading: 0, always_down: false, ..common::SMALL };
    for g in common::systems(32, 200, shape) {
        let ni = check_ni(&g).unwrap();
        let ini = check_ini(&g, IniMethod::Both).unwrap();
        assert_eq!(ni.holds, ini.holds);
        assert_eq!(ini.breakdown.len(), 1);
    }
}

#[test]
fn verdicts_match_enumeration_and_witnesses_are_valid() {
    for (i, g) in common::systems(33, 300, common::SMALL).iter().enumerate() {
        let low = g.alphabet().observable();
        let down = g.alphabet().downgrading();
        let ni = check_ni(g).unwrap();
        if let Some(w) = escaping_word(g, 6, |w| project_natural(w, &low)) {
            assert!(!ni.holds, "instance {i}: {w} escapes");
        }
        if let (Some(w), Some(pre)) = (&ni.witness, &ni.preimage) {
            assert!(!in_l(g, w) && in_l(g, pre) && project_natural(pre, &low) == *w, "instance {i}");
        }
        assert_eq!(ni.holds, ni.witness.is_none());

        let ini = check_ini(g, IniMethod::Both).unwrap();
        if let Some(w) = escaping_word(g, 6, |w| project_orwellian(w, &low, &down)) {
            assert!(!ini.holds, "instance {i}: {w} escapes");
        }
        if let (Some(w), Some(pre)) = (&ini.witness, &ini.preimage) {
            assert!(!in_l(g, w) && in_l(g, pre) && project_orwellian(pre, &low, &down) == *w, "instance {i}");
        }
        assert_eq!(ini.holds, ini.witness.is_none());
    }
}

#[test]
fn fixtures_agree_across_methods() {
    for g in [fixtures::g2(), fixtures::hdl(), fixtures::static_ab()] {
        let direct = check_ini_direct(&g).unwrap();
        let decomposed = check_ini_decomposed(&g).unwrap();
        assert_eq!(direct.holds, decomposed.holds);
    }
    let g2 = check_ini_decomposed(&fixtures::g2()).unwrap();
    assert_eq!(failing_states(&g2).into_iter().collect::<Vec<_>>(), ["1", "4"]);
    // from 4: "h l l" is in the language, its Low projection "l l" is not
    assert_eq!(g2.breakdown[1].local_witness, Some(Word::parse("l l")));
}
