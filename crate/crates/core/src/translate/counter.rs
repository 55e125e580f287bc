//! A family of small formulas whose unique model counts to `2^n - 1`.

use std::sync::Arc;

use crate::error::Result;
use crate::logic::{ltl_to_vldl, AutomatonTable, Formula, LtlFormula};
use crate::word::{LassoWord, Letter, LetterClass, LetterId, PushdownAlphabet};

/// Local letters `0`, `1`, `#` carrying `zero`, `one`, `hash`.
pub fn counter_alphabet() -> Arc<PushdownAlphabet> {
    Arc::new(
        PushdownAlphabet::new(vec![
            Letter::new("0", ["zero"], LetterClass::Local),
            Letter::new("1", ["one"], LetterClass::Local),
            Letter::new("#", ["hash"], LetterClass::Local),
        ])
        .unwrap(),
    )
}

/// `# bin(0) # bin(1) # ⋯ # bin(2^n − 1) #^ω`, most significant bit first.
pub fn counter_word(n: usize) -> LassoWord {
    let (zero, one, hash) = (LetterId(0), LetterId(1), LetterId(2));
    let mut prefix = Vec::new();
    for value in 0..1usize << n {
        prefix.push(hash);
        for bit in (0..n).rev() {
            prefix.push(if value >> bit & 1 == 1 { one } else { zero });
        }
    }
    LassoWord::new(prefix, vec![hash]).unwrap()
}

fn next_n(f: LtlFormula, n: usize) -> LtlFormula {
    (0..n).fold(f, |g, _| LtlFormula::next(g))
}

fn implies(a: LtlFormula, b: LtlFormula) -> LtlFormula {
    LtlFormula::or(LtlFormula::not(a), b)
}

fn iff(a: LtlFormula, b: LtlFormula) -> LtlFormula {
    LtlFormula::and(implies(a.clone(), b.clone()), implies(b, a))
}

/// Carry-ripple counter specification of size linear in `n`.
pub fn counter_ltl(n: usize) -> LtlFormula {
    assert!(n >= 1);
    let zero = LtlFormula::atom("zero");
    let one = LtlFormula::atom("one");
    let hash = LtlFormula::atom("hash");
    let bit = LtlFormula::or(zero.clone(), one.clone());
    let all = |fs: Vec<LtlFormula>| fs.into_iter().reduce(LtlFormula::and).unwrap();
    // the block starting after the current position: n letters of `letter`, then #
    let block = |letter: LtlFormula| {
        let mut f = LtlFormula::next(hash.clone());
        for _ in 0..n {
            f = LtlFormula::next(LtlFormula::and(letter.clone(), f));
        }
        f
    };
    // all bits from the next position up to the next # are ones
    let ones_after = LtlFormula::next(LtlFormula::until(one.clone(), hash.clone()));
    let opens_block = LtlFormula::and(
        hash.clone(),
        LtlFormula::next(LtlFormula::not(hash.clone())),
    );

    let init = LtlFormula::and(hash.clone(), block(zero.clone()));
    let shape = LtlFormula::always(implies(opens_block.clone(), block(bit)));
    let tail = LtlFormula::always(implies(
        LtlFormula::and(hash.clone(), LtlFormula::next(hash.clone())),
        LtlFormula::always(hash.clone()),
    ));
    let last = LtlFormula::always(implies(
        LtlFormula::and(opens_block.clone(), ones_after.clone()),
        next_n(LtlFormula::always(hash.clone()), n + 1),
    ));
    let more = LtlFormula::always(implies(
        LtlFormula::and(opens_block, LtlFormula::not(ones_after.clone())),
        next_n(LtlFormula::not(hash.clone()), n + 2),
    ));
    // a bit flips in the next block iff all less significant bits are ones
    let increment = LtlFormula::always(implies(
        LtlFormula::and(
            LtlFormula::not(hash.clone()),
            next_n(LtlFormula::not(hash), n + 1),
        ),
        iff(
            next_n(one.clone(), n + 1),
            iff(one, LtlFormula::not(ones_after)),
        ),
    ));
    all(vec![init, shape, tail, last, more, increment])
}

pub fn counter_formula(n: usize) -> Result<(Formula, AutomatonTable)> {
    ltl_to_vldl(&counter_ltl(n), counter_alphabet())
}
