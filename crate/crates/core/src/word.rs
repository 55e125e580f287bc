//! Pushdown alphabets, finite and lasso words, and the stack-height structure
//! (heights, matched calls, steps) of a lasso word.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LetterClass {
    Call,
    Return,
    Local,
}

impl fmt::Display for LetterClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LetterClass::Call => "call",
            LetterClass::Return => "return",
            LetterClass::Local => "local",
        })
    }
}

/// Index of a letter inside its [`PushdownAlphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LetterId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Letter {
    pub id: String,
    pub props: BTreeSet<String>,
    pub class: LetterClass,
}

impl Letter {
    pub fn new<I, S>(id: &str, props: I, class: LetterClass) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Letter {
            id: id.to_string(),
            props: props.into_iter().map(Into::into).collect(),
            class,
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A finite alphabet partitioned into calls, returns and local actions.
/// Each letter is a set of atomic propositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushdownAlphabet {
    letters: Vec<Letter>,
    by_id: HashMap<String, usize>,
}

impl PushdownAlphabet {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Input(
                "alphabet must declare at least one letter".into(),
            ));
        }
        let mut by_id = HashMap::new();
        for (i, letter) in letters.iter().enumerate() {
            if letter.id.is_empty() || letter.id.contains(char::is_whitespace) || letter.id == ";" {
                return Err(Error::Input(format!("invalid letter id `{}`", letter.id)));
            }
            if let Some(p) = letter.props.iter().find(|p| !is_identifier(p)) {
                return Err(Error::Input(format!(
                    "letter `{}` carries invalid proposition name `{p}`",
                    letter.id
                )));
            }
            if by_id.insert(letter.id.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate letter id `{}`", letter.id)));
            }
        }
        Ok(PushdownAlphabet { letters, by_id })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = LetterId> + '_ {
        (0..self.letters.len()).map(LetterId)
    }

    pub fn letter(&self, id: LetterId) -> &Letter {
        &self.letters[id.0]
    }

    pub fn class(&self, id: LetterId) -> LetterClass {
        self.letters[id.0].class
    }

    pub fn name(&self, id: LetterId) -> &str {
        &self.letters[id.0].id
    }

    pub fn lookup(&self, name: &str) -> Option<LetterId> {
        self.by_id.get(name).copied().map(LetterId)
    }

    pub fn resolve(&self, name: &str) -> Result<LetterId> {
        self.lookup(name)
            .ok_or_else(|| Error::Input(format!("unknown letter `{name}`")))
    }

    pub fn holds(&self, id: LetterId, prop: &str) -> bool {
        self.letters[id.0].props.contains(prop)
    }

    /// The declared proposition set, i.e. the union of all letters' props.
    pub fn propositions(&self) -> BTreeSet<&str> {
        self.letters
            .iter()
            .flat_map(|l| l.props.iter().map(String::as_str))
            .collect()
    }

    /// The proposition used to expand `tt`/`ff`: the first one declared.
    pub fn designated_proposition(&self) -> Option<&str> {
        self.letters
            .iter()
            .flat_map(|l| l.props.iter())
            .next()
            .map(String::as_str)
    }

    pub fn of_class(&self, class: LetterClass) -> Vec<LetterId> {
        self.ids().filter(|&a| self.class(a) == class).collect()
    }

    pub fn contains(&self, id: LetterId) -> bool {
        id.0 < self.letters.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FiniteWord(pub Vec<LetterId>);

impl FiniteWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parse(alphabet: &PushdownAlphabet, text: &str) -> Result<Self> {
        text.split_whitespace()
            .map(|t| alphabet.resolve(t))
            .collect::<Result<Vec<_>>>()
            .map(FiniteWord)
    }
}

/// The ultimately periodic word `prefix · period^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoWord {
    prefix: Vec<LetterId>,
    period: Vec<LetterId>,
}

impl LassoWord {
    pub fn new(prefix: Vec<LetterId>, period: Vec<LetterId>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Input("lasso period must be nonempty".into()));
        }
        Ok(LassoWord { prefix, period })
    }

    /// Parses `"u1 u2 ; v1 v2"`; the `;` separates prefix from period.
    pub fn parse(alphabet: &PushdownAlphabet, text: &str) -> Result<Self> {
        let (u, v) = text
            .split_once(';')
            .ok_or_else(|| Error::Input(format!("lasso `{text}` lacks the `;` separator")))?;
        LassoWord::new(
            FiniteWord::parse(alphabet, u)?.0,
            FiniteWord::parse(alphabet, v)?.0,
        )
    }

    pub fn prefix(&self) -> &[LetterId] {
        &self.prefix
    }

    pub fn period(&self) -> &[LetterId] {
        &self.period
    }

    pub fn letter_at(&self, p: usize) -> LetterId {
        if p < self.prefix.len() {
            self.prefix[p]
        } else {
            self.period[(p - self.prefix.len()) % self.period.len()]
        }
    }

    /// Canonical representative of the suffix starting at `p`.
    pub fn suffix_class(&self, p: usize) -> usize {
        let u = self.prefix.len();
        if p < u {
            p
        } else {
            u + (p - u) % self.period.len()
        }
    }

    pub fn class_count(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn next_class(&self, c: usize) -> usize {
        if c + 1 < self.class_count() {
            c + 1
        } else {
            self.prefix.len()
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = LetterId> + '_ {
        self.prefix.iter().chain(self.period.iter()).copied()
    }

    pub fn check_alphabet(&self, alphabet: &PushdownAlphabet) -> Result<()> {
        match self.letters().find(|&a| !alphabet.contains(a)) {
            Some(a) => Err(Error::Input(format!(
                "letter index {} not in alphabet",
                a.0
            ))),
            None => Ok(()),
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a PushdownAlphabet) -> LassoDisplay<'a> {
        LassoDisplay {
            word: self,
            alphabet,
        }
    }
}

pub struct LassoDisplay<'a> {
    word: &'a LassoWord,
    alphabet: &'a PushdownAlphabet,
}

impl fmt::Display for LassoDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |w: &[LetterId]| {
            w.iter()
                .map(|&a| self.alphabet.name(a))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let u = names(&self.word.prefix);
        let v = names(&self.word.period);
        if u.is_empty() {
            write!(f, "; {v}")
        } else {
            write!(f, "{u} ; {v}")
        }
    }
}

/// Largest drop of the stack height inside one period, relative to the
/// height at the period start (0 if the period never dips).
fn period_dip(classes: &[LetterClass]) -> usize {
    let mut level: i64 = 0;
    let mut lowest: i64 = 0;
    for c in classes {
        match c {
            LetterClass::Call => level += 1,
            LetterClass::Return => level -= 1,
            LetterClass::Local => {}
        }
        lowest = lowest.min(level);
    }
    (-lowest) as usize
}

fn net_effect(classes: &[LetterClass]) -> i64 {
    classes
        .iter()
        .map(|c| match c {
            LetterClass::Call => 1,
            LetterClass::Return => -1,
            LetterClass::Local => 0,
        })
        .sum()
}

/// Stack heights, matched calls and steps of one lasso word.
///
/// Heights are "height before reading position k", so position 0 always has
/// height 0. Beyond the threshold `N` everything repeats with period `P`
/// (heights shifted by `drift` per period).
#[derive(Debug, Clone)]
pub struct StackProfile {
    prefix_len: usize,
    period_len: usize,
    /// Letter class per suffix class.
    classes: Vec<LetterClass>,
    heights: Vec<usize>,
    threshold: usize,
    period: usize,
    drift: usize,
    dip: usize,
    net: i64,
    matching: Vec<Option<usize>>,
    steps: Vec<bool>,
}

impl StackProfile {
    pub fn build(alphabet: &PushdownAlphabet, word: &LassoWord) -> Result<Self> {
        word.check_alphabet(alphabet)?;
        let prefix_len = word.prefix().len();
        let period_len = word.period().len();
        let classes: Vec<LetterClass> = word.letters().map(|a| alphabet.class(a)).collect();
        let period_classes = &classes[prefix_len..];
        let dip = period_dip(period_classes);
        let net = net_effect(period_classes);

        let class_at = |p: usize| classes[word.suffix_class(p)];

        let mut max_height = 0usize;
        {
            let mut h = 0usize;
            for p in 0..prefix_len + period_len {
                h = step_height(h, class_at(p));
                max_height = max_height.max(h);
            }
        }
        let threshold = prefix_len + period_len * (max_height + dip + 2);
        let period = period_len;
        let drift = net.max(0) as usize;

        let stored = threshold + 2 * period + 1;
        let mut heights = Vec::with_capacity(stored);
        let mut h = 0usize;
        for p in 0..stored {
            heights.push(h);
            h = step_height(h, class_at(p));
        }

        let mut profile = StackProfile {
            prefix_len,
            period_len,
            classes,
            heights,
            threshold,
            period,
            drift,
            dip,
            net,
            matching: Vec::new(),
            steps: Vec::new(),
        };

        let window = threshold + period;
        profile.matching = (0..window)
            .map(|k| {
                if profile.class_of(k) == LetterClass::Call {
                    profile.relative_drop(k + 1)
                } else {
                    None
                }
            })
            .collect();
        profile.steps = (0..window)
            .map(|k| profile.heights[k] == 0 || profile.relative_drop(k).is_none())
            .collect();

        profile.verify_periodicity()?;
        Ok(profile)
    }

    fn class_of(&self, p: usize) -> LetterClass {
        let c = if p < self.prefix_len {
            p
        } else {
            self.prefix_len + (p - self.prefix_len) % self.period_len
        };
        self.classes[c]
    }

    /// First position `j >= start` at which a return lowers the stack below
    /// the height it had before `start`, if any.
    fn relative_drop(&self, start: usize) -> Option<usize> {
        let mut j = start;
        let mut level: i64 = 0;
        // walk to the next period boundary
        while j < self.prefix_len || (j - self.prefix_len) % self.period_len != 0 {
            match self.class_of(j) {
                LetterClass::Call => level += 1,
                LetterClass::Return => {
                    if level == 0 {
                        return Some(j);
                    }
                    level -= 1;
                }
                LetterClass::Local => {}
            }
            j += 1;
        }
        let dip = self.dip as i64;
        if level - dip >= 0 {
            if self.net >= 0 {
                return None;
            }
            // skip whole periods that cannot reach below the start level
            let periods = (level - dip) / (-self.net) + 1;
            level += periods * self.net;
            j += periods as usize * self.period_len;
        }
        for _ in 0..self.period_len {
            match self.class_of(j) {
                LetterClass::Call => level += 1,
                LetterClass::Return => {
                    if level == 0 {
                        return Some(j);
                    }
                    level -= 1;
                }
                LetterClass::Local => {}
            }
            j += 1;
        }
        unreachable!("a period starting below its dip must drop")
    }

    fn verify_periodicity(&self) -> Result<()> {
        let (n, p) = (self.threshold, self.period);
        for k in n..n + p {
            let violated = self.class_of(k) != self.class_of(k + p)
                || self.heights[k + p] != self.heights[k] + self.drift
                || self.relative_drop_at(k + p) != self.relative_drop_at(k).map(|m| m + p)
                || self.steps[k]
                    != (self.heights[k + p] == 0 || self.relative_drop(k + p).is_none());
            if violated {
                return Err(Error::Internal(format!(
                    "stack profile periodicity (N={n}, P={p}) violated at {k}"
                )));
            }
        }
        Ok(())
    }

    fn relative_drop_at(&self, k: usize) -> Option<usize> {
        if self.class_of(k) == LetterClass::Call {
            self.relative_drop(k + 1)
        } else {
            None
        }
    }

    /// The pair `(N, P)`: for all `p >= N` position `p + P` behaves like `p`.
    pub fn periodicity(&self) -> (usize, usize) {
        (self.threshold, self.period)
    }

    /// Height added per period beyond the threshold.
    pub fn drift(&self) -> usize {
        self.drift
    }

    /// Largest in-period height drop.
    pub fn dip(&self) -> usize {
        self.dip
    }

    pub fn net_effect(&self) -> i64 {
        self.net
    }

    pub fn height_before(&self, p: usize) -> usize {
        if p < self.heights.len() {
            return self.heights[p];
        }
        let (n, q) = (self.threshold, self.period);
        let k = (p - n) / q;
        self.heights[n + (p - n) % q] + k * self.drift
    }

    fn fold(&self, p: usize) -> (usize, usize) {
        let window = self.threshold + self.period;
        if p < window {
            (p, 0)
        } else {
            let k = (p - self.threshold) / self.period;
            (p - k * self.period, k * self.period)
        }
    }

    pub fn is_call(&self, k: usize) -> bool {
        self.class_of(k) == LetterClass::Call
    }

    /// Position of the matching return of the call at `k`, or `None` if the
    /// call is never matched.
    pub fn matching_return(&self, k: usize) -> Result<Option<usize>> {
        if !self.is_call(k) {
            return Err(Error::Contract(format!(
                "position {k} does not hold a call"
            )));
        }
        let (base, shift) = self.fold(k);
        Ok(self.matching[base].map(|m| m + shift))
    }

    pub fn is_matched_call(&self, k: usize) -> bool {
        self.is_call(k) && self.matching[self.fold(k).0].is_some()
    }

    pub fn is_step(&self, k: usize) -> bool {
        self.steps[self.fold(k).0]
    }
}

fn step_height(h: usize, class: LetterClass) -> usize {
    match class {
        LetterClass::Call => h + 1,
        LetterClass::Return => h.saturating_sub(1),
        LetterClass::Local => h,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cla() -> PushdownAlphabet {
        PushdownAlphabet::new(vec![
            Letter::new("c", ["call"], LetterClass::Call),
            Letter::new("r", ["ret"], LetterClass::Return),
            Letter::new("l", ["loc"], LetterClass::Local),
        ])
        .unwrap()
    }

    fn fig3() -> (PushdownAlphabet, LassoWord) {
        let a = cla();
        let w = LassoWord::parse(&a, "c l c r r c c l r l l ; l").unwrap();
        (a, w)
    }

    #[test]
    fn fig3_heights() {
        let (a, w) = fig3();
        let prof = StackProfile::build(&a, &w).unwrap();
        let hs: Vec<usize> = (0..13).map(|p| prof.height_before(p)).collect();
        assert_eq!(hs, vec![0, 1, 1, 2, 1, 0, 1, 2, 2, 1, 1, 1, 1]);
    }

    #[test]
    fn fig3_matching() {
        let (a, w) = fig3();
        let prof = StackProfile::build(&a, &w).unwrap();
        assert_eq!(prof.matching_return(0).unwrap(), Some(4));
        assert_eq!(prof.matching_return(2).unwrap(), Some(3));
        assert_eq!(prof.matching_return(6).unwrap(), Some(8));
        assert_eq!(prof.matching_return(5).unwrap(), None);
        assert!(matches!(prof.matching_return(1), Err(Error::Contract(_))));
    }

    #[test]
    fn fig3_steps() {
        let (a, w) = fig3();
        let prof = StackProfile::build(&a, &w).unwrap();
        let steps: Vec<usize> = (0..20).filter(|&k| prof.is_step(k)).collect();
        let mut expected = vec![0, 5, 6];
        expected.extend(9..20);
        assert_eq!(steps, expected);
    }

    #[test]
    fn trivial_profiles() {
        let a = cla();
        let locals = StackProfile::build(&a, &LassoWord::parse(&a, "; l").unwrap()).unwrap();
        assert!((0..10).all(|k| locals.height_before(k) == 0 && locals.is_step(k)));
        let returns = StackProfile::build(&a, &LassoWord::parse(&a, "; r").unwrap()).unwrap();
        assert!((0..10).all(|k| returns.height_before(k) == 0));
        let calls = StackProfile::build(&a, &LassoWord::parse(&a, "; c").unwrap()).unwrap();
        assert!((0..10).all(|k| calls.matching_return(k).unwrap().is_none()));
        assert_eq!(calls.height_before(1000), 1000);
    }

    #[test]
    fn suffix_classes() {
        let a = cla();
        let w = LassoWord::parse(&a, "c c c ; l r").unwrap();
        assert_eq!(w.suffix_class(7), 3);
        assert_eq!(w.suffix_class(2), 2);
        let w = LassoWord::parse(&a, "; l").unwrap();
        assert_eq!(w.suffix_class(17), 0);
    }

    #[test]
    fn deep_prefix_matching_beyond_naive_horizon() {
        let a = cla();
        let w = LassoWord::parse(&a, "c c c c c ; r").unwrap();
        let prof = StackProfile::build(&a, &w).unwrap();
        assert_eq!(prof.matching_return(0).unwrap(), Some(9));
    }

    #[test]
    fn empty_period_rejected() {
        let a = cla();
        assert!(LassoWord::parse(&a, "c ;").is_err());
        assert!(LassoWord::parse(&a, "c x ; l").is_err());
    }

    #[test]
    fn alphabet_validation() {
        assert!(PushdownAlphabet::new(vec![]).is_err());
        let dup = vec![
            Letter::new("a", ["p"], LetterClass::Local),
            Letter::new("a", ["q"], LetterClass::Call),
        ];
        assert!(PushdownAlphabet::new(dup).is_err());
    }
}
