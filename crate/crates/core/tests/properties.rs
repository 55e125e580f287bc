//! Property tests over the seeded corpus. Each case draws a seed and feeds
//! it to the corpus generators, so failures shrink to a reproducible seed.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vldl_core::corpus::{random_alphabet, random_instance, random_lasso};
use vldl_core::logic::parse_formula;
use vldl_core::project::Project;
use vldl_core::semantics::{aja_accepts, evaluate, evaluate_at};
use vldl_core::translate::vldl_to_aja;
use vldl_core::word::{LassoWord, LetterClass, PushdownAlphabet, StackProfile};

const HORIZON: usize = 200;

fn heights(alphabet: &PushdownAlphabet, w: &LassoWord, len: usize) -> Vec<usize> {
    let mut h = vec![0usize];
    for p in 0..len {
        let last = *h.last().unwrap();
        h.push(match alphabet.class(w.letter_at(p)) {
            LetterClass::Call => last + 1,
            LetterClass::Return => last.saturating_sub(1),
            LetterClass::Local => last,
        });
    }
    h
}

/// The same infinite word written with a longer prefix and a doubled period.
fn unroll(w: &LassoWord) -> LassoWord {
    let (u, v) = (w.prefix(), w.period());
    let mut prefix = u.to_vec();
    prefix.push(v[0]);
    let mut period: Vec<_> = v[1..].iter().chain(&v[..1]).copied().collect();
    period.extend(period.clone());
    LassoWord::new(prefix, period).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printed_formulas_parse_back(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 12);
        let text = inst.formula.to_string();
        prop_assert_eq!(parse_formula(&text, &inst.table).unwrap(), inst.formula);
    }

    #[test]
    fn negation_normal_form_is_equivalent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 12);
        let nnf = inst.formula.nnf();
        prop_assert!(nnf.is_nnf());
        let w = random_lasso(&mut rng, inst.table.alphabet(), 4, 3);
        prop_assert_eq!(evaluate(&nnf, &inst.table, &w).unwrap(), evaluate(&inst.formula, &inst.table, &w).unwrap());
    }

    #[test]
    fn truth_ignores_lasso_presentation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 12);
        let w = random_lasso(&mut rng, inst.table.alphabet(), 4, 3);
        let other = unroll(&w);
        let aja = vldl_to_aja(&inst.formula, &inst.table).unwrap();
        prop_assert_eq!(aja_accepts(&aja, &w).unwrap(), aja_accepts(&aja, &other).unwrap());
        for k in 0..w.prefix().len() + 2 * w.period().len() {
            prop_assert_eq!(
                evaluate_at(&inst.formula, &inst.table, &w, k).unwrap(),
                evaluate_at(&inst.formula, &inst.table, &other, k).unwrap()
            );
        }
    }

    #[test]
    fn stack_profile_matches_simulation(seed in any::<u64>(), letters in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alphabet = random_alphabet(&mut rng, letters);
        let w = random_lasso(&mut rng, &alphabet, 4, 3);
        let profile = StackProfile::build(&alphabet, &w).unwrap();
        let window = 3 * (w.prefix().len() + w.period().len());
        let h = heights(&alphabet, &w, window + HORIZON + 1);
        let (threshold, period) = profile.periodicity();
        for p in 0..window {
            prop_assert_eq!(profile.height_before(p), h[p], "height before {}", p);
            let step = (p..=p + HORIZON).all(|j| h[j] >= h[p]);
            prop_assert_eq!(profile.is_step(p), step, "step at {}", p);
            if p >= threshold {
                prop_assert_eq!(profile.is_step(p), profile.is_step(p + period));
            }
            if profile.is_call(p) {
                let matching = (p + 1..p + HORIZON).find(|&j| h[j + 1] == h[p]);
                prop_assert_eq!(profile.matching_return(p).unwrap(), matching, "match of {}", p);
            } else {
                prop_assert!(profile.matching_return(p).is_err());
            }
        }
    }

    #[test]
    fn projects_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 12);
        let mut p = Project::new(inst.table.alphabet().clone());
        p.table = inst.table.clone();
        p.formulas.insert("f".into(), inst.formula.clone());
        p.words.insert("w".into(), random_lasso(&mut rng, inst.table.alphabet(), 4, 3));
        let json = p.to_json();
        let back = Project::from_json(&json).unwrap();
        prop_assert_eq!(&back.formulas["f"], &inst.formula);
        prop_assert_eq!(back.to_json(), json);
    }
}
