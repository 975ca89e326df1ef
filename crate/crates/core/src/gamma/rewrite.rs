//! A plain string-rewriting implementation of the five defining rules, used
//! to audit confluence against the algebraic normal form.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::word::{FreeWord, Letter};
use super::{normal_form, AdmMono, GammaElem};
use crate::poly::PolyA;

type Lin = BTreeMap<Vec<Letter>, BigInt>;

/// Which redex to contract at each step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    /// Uniformly random redex, reproducible from the seed.
    Random(u64),
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Leftmost => write!(f, "leftmost"),
            Strategy::Rightmost => write!(f, "rightmost"),
            Strategy::Random(s) => write!(f, "random({s})"),
        }
    }
}

/// Right-hand side of the rule whose left-hand side is `x y`, if any.
fn rule(x: Letter, y: Letter) -> Option<Vec<(i64, Vec<Letter>)>> {
    use Letter::*;
    let r = match (x, y) {
        (Q(0), A) => vec![(1, vec![A, A, Q(0)]), (-2, vec![A, Q(1)]), (6, vec![Q(2)])],
        (Q(1), A) => vec![(3, vec![Q(0)]), (1, vec![A, Q(2)])],
        (Q(2), A) => vec![(-1, vec![A, Q(0)]), (3, vec![Q(1)])],
        (Q(1), Q(0)) => vec![(2, vec![Q(2), Q(1)]), (-2, vec![Q(0), Q(2)])],
        (Q(2), Q(0)) => vec![
            (1, vec![Q(0), Q(1)]),
            (1, vec![A, Q(0), Q(2)]),
            (-2, vec![Q(1), Q(2)]),
        ],
        _ => return None,
    };
    Some(r)
}

fn redexes(w: &[Letter]) -> Vec<usize> {
    (0..w.len().saturating_sub(1))
        .filter(|&i| rule(w[i], w[i + 1]).is_some())
        .collect()
}

fn add_into(acc: &mut Lin, w: Vec<Letter>, c: BigInt) {
    let e = acc.entry(w).or_insert_with(BigInt::zero);
    *e += c;
}

fn prune(acc: &mut Lin) {
    acc.retain(|_, c| !c.is_zero());
}

fn contract(w: &[Letter], pos: usize) -> Vec<(i64, Vec<Letter>)> {
    let rhs = rule(w[pos], w[pos + 1]).expect("redex");
    rhs.into_iter()
        .map(|(c, mid)| {
            let mut out = w[..pos].to_vec();
            out.extend(mid);
            out.extend_from_slice(&w[pos + 2..]);
            (c, out)
        })
        .collect()
}

/// Reduces integer combinations of words by single-redex steps.
///
/// Summands are reduced independently, so the reduction of each distinct
/// word is computed once (with its redex chosen by the strategy) and reused
/// wherever the word reappears.
pub struct WordRewriter {
    strategy: Strategy,
    rng: ChaCha8Rng,
    steps: u64,
    memo: HashMap<Vec<Letter>, Rc<Lin>>,
}

impl WordRewriter {
    pub fn new(strategy: Strategy) -> Self {
        let seed = match strategy {
            Strategy::Random(s) => s,
            _ => 0,
        };
        WordRewriter {
            strategy,
            rng: ChaCha8Rng::seed_from_u64(seed),
            steps: 0,
            memo: HashMap::new(),
        }
    }

    /// Number of single-rule applications performed so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn pick(&mut self, reds: &[usize]) -> usize {
        match self.strategy {
            Strategy::Leftmost => reds[0],
            Strategy::Rightmost => reds[reds.len() - 1],
            Strategy::Random(_) => reds[self.rng.gen_range(0..reds.len())],
        }
    }

    fn reduce_word(&mut self, w: &[Letter]) -> Rc<Lin> {
        let mut plans: HashMap<Vec<Letter>, Vec<(i64, Vec<Letter>)>> = HashMap::new();
        let mut stack: Vec<(Vec<Letter>, bool)> = vec![(w.to_vec(), false)];
        while let Some((word, expanded)) = stack.pop() {
            if self.memo.contains_key(&word) {
                continue;
            }
            if expanded {
                let mut acc = Lin::new();
                for (k, child) in &plans[&word] {
                    for (irr, c) in self.memo[child].iter() {
                        add_into(&mut acc, irr.clone(), c * k);
                    }
                }
                prune(&mut acc);
                self.memo.insert(word, Rc::new(acc));
                continue;
            }
            let reds = redexes(&word);
            if reds.is_empty() {
                self.memo
                    .insert(word.clone(), Rc::new(Lin::from([(word, BigInt::from(1))])));
                continue;
            }
            let pos = self.pick(&reds);
            self.steps += 1;
            let children = contract(&word, pos);
            stack.push((word.clone(), true));
            for (_, child) in &children {
                if !self.memo.contains_key(child) {
                    stack.push((child.clone(), false));
                }
            }
            plans.insert(word, children);
        }
        self.memo[w].clone()
    }

    /// Rewrites until no summand contains a redex.
    pub fn reduce(&mut self, w: &FreeWord) -> GammaElem {
        let mut done: Lin = BTreeMap::new();
        for (c, letters) in w.summands() {
            for (irr, k) in self.reduce_word(letters).iter() {
                add_into(&mut done, irr.clone(), c * k);
            }
        }
        prune(&mut done);
        irreducible_to_gamma(&done)
    }
}

/// Irreducible words are exactly `a^m Q0^j Q_{k1} ... Q_{kr}`.
fn irreducible_to_gamma(lin: &Lin) -> GammaElem {
    let mut out = GammaElem::zero();
    for (w, c) in lin {
        let m = w.iter().take_while(|&&l| l == Letter::A).count();
        let rest = &w[m..];
        let j = rest.iter().take_while(|&&l| l == Letter::Q(0)).count();
        let word: Vec<u8> = rest[j..]
            .iter()
            .map(|l| match l {
                Letter::Q(k @ (1 | 2)) => *k,
                other => panic!("reducible letter {other} left in irreducible word"),
            })
            .collect();
        let coeff = PolyA::monomial(c.clone(), m);
        out = out.add(&GammaElem::term(coeff, AdmMono::new(j as u32, word)));
    }
    out
}

/// An overlap `x y z` where both `x y` and `y z` are left-hand sides.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalPair {
    pub overlap: String,
    pub via_left: String,
    pub via_right: String,
    pub joinable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Divergence {
    pub word: String,
    pub strategy: String,
    pub got: String,
    pub expected: String,
    /// Critical-pair overlaps occurring as factors of the offending word.
    pub critical_pairs: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfluenceReport {
    pub max_deg: usize,
    pub max_a: usize,
    pub words_checked: usize,
    pub rewrite_steps: u64,
    pub critical_pairs: Vec<CriticalPair>,
    pub divergences: Vec<Divergence>,
}

impl ConfluenceReport {
    pub fn ok(&self) -> bool {
        self.divergences.is_empty() && self.critical_pairs.iter().all(|c| c.joinable)
    }
}

fn all_overlaps() -> Vec<[Letter; 3]> {
    let alphabet = [Letter::A, Letter::Q(0), Letter::Q(1), Letter::Q(2)];
    let mut out = Vec::new();
    for &x in &alphabet {
        for &y in &alphabet {
            for &z in &alphabet {
                if rule(x, y).is_some() && rule(y, z).is_some() {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

fn word_string(w: &[Letter]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(Letter::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn critical_pairs() -> Vec<CriticalPair> {
    all_overlaps()
        .into_iter()
        .map(|o| {
            let reduce_after = |pos: usize| {
                let summands = contract(&o, pos)
                    .into_iter()
                    .map(|(c, w)| (BigInt::from(c), w))
                    .collect();
                WordRewriter::new(Strategy::Leftmost).reduce(&FreeWord::new(summands))
            };
            let l = reduce_after(0);
            let r = reduce_after(1);
            CriticalPair {
                overlap: word_string(&o),
                via_left: l.render(),
                via_right: r.render(),
                joinable: l == r,
            }
        })
        .collect()
}

/// All words with at most `max_a` letters `a` and at most `max_deg`
/// letters from `Q0, Q1, Q2`.
fn enumerate_words(max_deg: usize, max_a: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(Vec<Letter>, usize, usize)> = vec![(Vec::new(), 0, 0)];
    while let Some((w, q, na)) = frontier.pop() {
        let mut push = |l: Letter, q2: usize, a2: usize| {
            let mut w2 = w.clone();
            w2.push(l);
            out.push(w2.clone());
            frontier.push((w2, q2, a2));
        };
        if na < max_a {
            push(Letter::A, q, na + 1);
        }
        if q < max_deg {
            for k in 0..3 {
                push(Letter::Q(k), q + 1, na);
            }
        }
    }
    out.sort();
    out
}

/// Reduces every bounded word under several strategies and compares each
/// result with the algebraic normal form; also resolves all critical pairs.
pub fn check_confluence(max_deg: usize, max_a: usize) -> ConfluenceReport {
    let overlaps = all_overlaps();
    let words = enumerate_words(max_deg, max_a);
    let strategies = [
        Strategy::Leftmost,
        Strategy::Rightmost,
        Strategy::Random(0x5eed),
    ];
    let mut rewriters: Vec<WordRewriter> =
        strategies.iter().map(|&s| WordRewriter::new(s)).collect();
    let mut divergences = Vec::new();
    for w in &words {
        let fw = FreeWord::word(w.clone());
        let expected = normal_form(&fw);
        for rw in rewriters.iter_mut() {
            let got = rw.reduce(&fw);
            if got != expected {
                let pairs = overlaps
                    .iter()
                    .filter(|o| w.windows(3).any(|win| win == o.as_slice()))
                    .map(|o| word_string(o))
                    .collect();
                divergences.push(Divergence {
                    word: word_string(w),
                    strategy: rw.strategy.to_string(),
                    got: got.render(),
                    expected: expected.render(),
                    critical_pairs: pairs,
                });
            }
        }
    }
    ConfluenceReport {
        max_deg,
        max_a,
        words_checked: words.len(),
        rewrite_steps: rewriters.iter().map(WordRewriter::steps).sum(),
        critical_pairs: critical_pairs(),
        divergences,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_rules_agree_with_engine() {
        for s in ["Q0 a", "Q1 a", "Q2 a", "Q1 Q0", "Q2 Q0"] {
            let w = FreeWord::parse(s).unwrap();
            assert_eq!(
                WordRewriter::new(Strategy::Leftmost).reduce(&w),
                normal_form(&w)
            );
        }
    }

    #[test]
    fn overlaps_are_the_two_expected_ones() {
        let names: Vec<String> = all_overlaps().iter().map(|o| word_string(o)).collect();
        assert_eq!(names, ["Q1 Q0 a", "Q2 Q0 a"]);
        assert!(critical_pairs().iter().all(|c| c.joinable));
    }

    #[test]
    fn strategies_agree_on_q1_q1_q0() {
        let w = FreeWord::parse("Q1 Q1 Q0").unwrap();
        let l = WordRewriter::new(Strategy::Leftmost).reduce(&w);
        let r = WordRewriter::new(Strategy::Rightmost).reduce(&w);
        assert_eq!(l, r);
        assert_eq!(l, normal_form(&w));
    }

    #[test]
    fn small_windows_confluent() {
        assert!(check_confluence(1, 1).ok());
        let pure_a = check_confluence(0, 3);
        assert!(pure_a.ok());
        assert_eq!(pure_a.words_checked, 4);
    }

    #[test]
    fn word_count() {
        // sum over q <= 1, k <= 1 of C(q + k, k) 3^q = 1 + 1 + 3 + 6
        assert_eq!(enumerate_words(1, 1).len(), 11);
    }
}
