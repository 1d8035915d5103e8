//! Finite automata over `{0, 1}` for level sets of integer sequences.
//!
//! A level set `S(e) = { i : f(i) = e }` is compared with an automaton by
//! feeding it the binary expansions (MSB first, no leading zeros) of every
//! `i` up to a bound. Words with leading zeros never reach an automaton
//! during verification, so what an automaton does with them is irrelevant.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bitseq::{bit_length, runs_of_value, BinaryWord};
use crate::error::{Error, Result};
use crate::pallen::PalLengthTable;

/// A complete deterministic automaton over `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dfa {
    initial: usize,
    delta: Vec<[usize; 2]>,
    accepting: Vec<bool>,
}

impl Dfa {
    pub fn new(initial: usize, delta: Vec<[usize; 2]>, accepting: &[usize]) -> Result<Self> {
        let k = delta.len();
        if k == 0 {
            return Err(Error::InvalidDfa("no states".into()));
        }
        if initial >= k {
            return Err(Error::InvalidDfa(format!(
                "initial state {initial} out of range 0..{k}"
            )));
        }
        if let Some((q, row)) = delta
            .iter()
            .enumerate()
            .find(|(_, row)| row.iter().any(|&t| t >= k))
        {
            return Err(Error::InvalidDfa(format!(
                "transition from {q} targets {row:?}, outside 0..{k}"
            )));
        }
        let mut acc = vec![false; k];
        for &q in accepting {
            if q >= k {
                return Err(Error::InvalidDfa(format!(
                    "accepting state {q} out of range 0..{k}"
                )));
            }
            acc[q] = true;
        }
        Ok(Dfa {
            initial,
            delta,
            accepting: acc,
        })
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn next(&self, q: usize, bit: u8) -> usize {
        self.delta[q][bit as usize & 1]
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        self.accepting
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(q, _)| q)
    }

    pub fn run(&self, bits: impl IntoIterator<Item = u8>) -> usize {
        bits.into_iter().fold(self.initial, |q, b| self.next(q, b))
    }

    pub fn accepts(&self, bits: impl IntoIterator<Item = u8>) -> bool {
        self.accepting[self.run(bits)]
    }

    pub fn accepts_word(&self, w: &BinaryWord) -> bool {
        self.accepts(w.digits())
    }

    /// Runs the binary expansion of `n >= 1`.
    pub fn accepts_index(&self, n: u64) -> bool {
        let len = bit_length(n);
        self.accepts((0..len).rev().map(|e| ((n >> e) & 1) as u8))
    }

    /// States reachable from the initial state, in breadth-first order
    /// (0-successor before 1-successor).
    pub fn reachable(&self) -> Vec<usize> {
        let mut order = vec![self.initial];
        let mut seen = vec![false; self.state_count()];
        seen[self.initial] = true;
        let mut head = 0;
        while head < order.len() {
            let q = order[head];
            head += 1;
            for &t in &self.delta[q] {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    pub fn reachable_count(&self) -> usize {
        self.reachable().len()
    }

    /// Language-equivalent automaton with the fewest states, numbered in
    /// breadth-first order from the initial state.
    ///
    /// Drops unreachable states, then refines the accepting/rejecting split
    /// until every block is closed under both transitions (Moore's
    /// algorithm).
    pub fn minimize(&self) -> Dfa {
        let order = self.reachable();
        let mut class = vec![usize::MAX; self.state_count()];
        for &q in &order {
            class[q] = usize::from(self.accepting[q]);
        }
        let mut blocks = order
            .iter()
            .map(|&q| class[q])
            .collect::<BTreeSet<_>>()
            .len();
        loop {
            let mut ids: HashMap<(usize, usize, usize), usize> = HashMap::new();
            let mut refined = vec![usize::MAX; self.state_count()];
            for &q in &order {
                let sig = (class[q], class[self.delta[q][0]], class[self.delta[q][1]]);
                let next_id = ids.len();
                refined[q] = *ids.entry(sig).or_insert(next_id);
            }
            let stable = ids.len() == blocks;
            blocks = ids.len();
            class = refined;
            if stable {
                break;
            }
        }
        let quotient = Dfa {
            initial: class[self.initial],
            delta: {
                let mut d = vec![[0usize; 2]; blocks];
                for &q in &order {
                    d[class[q]] = [class[self.delta[q][0]], class[self.delta[q][1]]];
                }
                d
            },
            accepting: {
                let mut a = vec![false; blocks];
                for &q in &order {
                    a[class[q]] = self.accepting[q];
                }
                a
            },
        };
        quotient.renumbered()
    }

    /// Reachable part renumbered in breadth-first order.
    fn renumbered(&self) -> Dfa {
        let order = self.reachable();
        let mut index = vec![usize::MAX; self.state_count()];
        for (new, &old) in order.iter().enumerate() {
            index[old] = new;
        }
        Dfa {
            initial: 0,
            delta: order
                .iter()
                .map(|&q| [index[self.delta[q][0]], index[self.delta[q][1]]])
                .collect(),
            accepting: order.iter().map(|&q| self.accepting[q]).collect(),
        }
    }

    /// True when the reachable parts are identical up to renaming states.
    pub fn is_isomorphic(&self, other: &Dfa) -> bool {
        self.renumbered() == other.renumbered()
    }

    /// Line-oriented text form:
    ///
    /// ```text
    /// states 3 initial 0
    /// 0 0 2
    /// 0 1 1
    /// ...
    /// accepting 1
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "states {} initial {}",
            self.state_count(),
            self.initial
        );
        for (q, row) in self.delta.iter().enumerate() {
            for (bit, &t) in row.iter().enumerate() {
                let _ = writeln!(out, "{q} {bit} {t}");
            }
        }
        out.push_str("accepting");
        for q in self.accepting_states() {
            let _ = write!(out, " {q}");
        }
        out.push('\n');
        out
    }

    pub fn from_text(text: &str) -> Result<Dfa> {
        let err = |line: usize, msg: &str| Error::DfaParse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (hl, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
        let h: Vec<&str> = header.split(' ').collect();
        let (k, initial) = match h.as_slice() {
            ["states", k, "initial", q] => (
                k.parse::<usize>().map_err(|_| err(hl, "bad state count"))?,
                q.parse::<usize>()
                    .map_err(|_| err(hl, "bad initial state"))?,
            ),
            _ => return Err(err(hl, "expected `states K initial Q0`")),
        };
        let mut delta: Vec<[Option<usize>; 2]> = vec![[None; 2]; k];
        let mut accepting: Option<Vec<usize>> = None;
        let mut last_line = hl;
        for (ln, line) in lines {
            last_line = ln;
            if accepting.is_some() {
                return Err(err(ln, "content after the accepting line"));
            }
            let fields: Vec<&str> = line.split(' ').collect();
            if fields.first() == Some(&"accepting") {
                let states = fields[1..]
                    .iter()
                    .map(|f| {
                        f.parse::<usize>()
                            .map_err(|_| err(ln, "bad accepting state"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                accepting = Some(states);
                continue;
            }
            let [q, bit, t] = fields.as_slice() else {
                return Err(err(ln, "expected `q bit q'`"));
            };
            let q = q
                .parse::<usize>()
                .map_err(|_| err(ln, "bad source state"))?;
            let t = t
                .parse::<usize>()
                .map_err(|_| err(ln, "bad target state"))?;
            let bit = match *bit {
                "0" => 0,
                "1" => 1,
                _ => return Err(err(ln, "bit must be 0 or 1")),
            };
            let slot = delta
                .get_mut(q)
                .ok_or_else(|| err(ln, "source state out of range"))?;
            if slot[bit].replace(t).is_some() {
                return Err(err(ln, "duplicate transition"));
            }
        }
        let accepting = accepting.ok_or_else(|| err(last_line, "missing accepting line"))?;
        let delta = delta
            .into_iter()
            .enumerate()
            .map(|(q, row)| match row {
                [Some(a), Some(b)] => Ok([a, b]),
                _ => Err(err(last_line, &format!("state {q} lacks a transition"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Dfa::new(initial, delta, &accepting)
    }
}

/// Automaton accepting exactly the binary expansions with `m` runs.
///
/// States: 0 is the start, `1..=m` are the run blocks (odd blocks read ones,
/// even blocks read zeros), `m + 1` is the sink.
pub fn dfa_for_run_count(m: usize) -> Result<Dfa> {
    if m == 0 {
        return Err(Error::ZeroLevel);
    }
    let sink = m + 1;
    let mut delta = vec![[sink; 2]; m + 2];
    delta[0] = [sink, 1];
    for (k, row) in delta.iter_mut().enumerate().take(m + 1).skip(1) {
        let own = usize::from(k % 2 == 1);
        row[own] = k;
        row[1 - own] = if k < m { k + 1 } else { sink };
    }
    Dfa::new(0, delta, &[m])
}

/// `{ i <= bound : f(i) = epsilon }`, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSet {
    pub epsilon: u32,
    pub bound: u64,
    pub members: Vec<u64>,
}

impl LevelSet {
    pub fn contains(&self, i: u64) -> bool {
        self.members.binary_search(&i).is_ok()
    }
}

pub fn level_set(f: impl Fn(u64) -> u32, epsilon: u32, bound: u64) -> Result<LevelSet> {
    if epsilon == 0 {
        return Err(Error::ZeroLevel);
    }
    if bound == 0 {
        return Err(Error::ZeroIndex);
    }
    Ok(LevelSet {
        epsilon,
        bound,
        members: (1..=bound).filter(|&i| f(i) == epsilon).collect(),
    })
}

/// Level set of a palindromic-length table over its whole range.
pub fn level_set_of_table(table: &PalLengthTable, epsilon: u32) -> Result<LevelSet> {
    level_set(|i| table.get(i as usize), epsilon, table.bound() as u64)
}

/// Level set of the run count.
pub fn run_count_level_set(epsilon: u32, bound: u64) -> Result<LevelSet> {
    level_set(runs_of_value, epsilon, bound)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub index: u64,
    pub accepted: bool,
    pub member: bool,
}

/// Every `i <= ls.bound` where the automaton and the level set disagree.
pub fn verify_dfa(dfa: &Dfa, ls: &LevelSet) -> Vec<Mismatch> {
    let mut members = ls.members.iter().peekable();
    let mut out = Vec::new();
    for i in 1..=ls.bound {
        let member = members.next_if_eq(&&i).is_some();
        let accepted = dfa.accepts_index(i);
        if accepted != member {
            out.push(Mismatch {
                index: i,
                accepted,
                member,
            });
        }
    }
    out
}

/// A conjectured automaton: consistent with membership on `1..=bound`, not
/// proven beyond it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnedDfa {
    pub dfa: Dfa,
    pub bound: u64,
    pub rounds: usize,
    pub membership_queries: usize,
    /// Queries the membership function could not answer; treated as
    /// non-members.
    pub unknown_queries: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnFailure {
    pub bound: u64,
    pub max_states: usize,
    pub states_reached: usize,
    pub rounds: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum LearnOutcome {
    Learned(LearnedDfa),
    Failed(LearnFailure),
}

struct Teacher<F> {
    membership: F,
    cache: HashMap<Vec<u8>, bool>,
    queries: usize,
    unknown: usize,
}

impl<F: Fn(u64) -> Option<bool>> Teacher<F> {
    fn query(&mut self, word: &[u8]) -> bool {
        if let Some(&v) = self.cache.get(word) {
            return v;
        }
        self.queries += 1;
        let answer = if word.first() != Some(&1) {
            false
        } else if word.len() > 64 {
            self.unknown += 1;
            false
        } else {
            let value = word.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
            match (self.membership)(value) {
                Some(v) => v,
                None => {
                    self.unknown += 1;
                    false
                }
            }
        };
        self.cache.insert(word.to_vec(), answer);
        answer
    }
}

/// Learns an automaton for `{ i : membership(i) }` from membership queries,
/// with equivalence checked exhaustively on `1..=max_index`.
///
/// Uses an observation table whose rows are access words and whose columns
/// are distinguishing suffixes. Counterexamples contribute all of their
/// suffixes as columns, which keeps the table consistent. Words that are
/// empty or start with 0 are answered as non-members. `membership` may be
/// asked about indices above `max_index`; returning `None` marks the answer
/// unknown (treated as a non-member and counted in the result).
pub fn learn_level_set_dfa(
    membership: impl Fn(u64) -> Option<bool>,
    max_index: u64,
    max_states: usize,
) -> LearnOutcome {
    let mut teacher = Teacher {
        membership,
        cache: HashMap::new(),
        queries: 0,
        unknown: 0,
    };
    let mut access: Vec<Vec<u8>> = vec![Vec::new()];
    let mut suffixes: Vec<Vec<u8>> = vec![Vec::new()];
    let mut rounds = 0usize;
    let fail = |states: usize, rounds: usize, reason: String| {
        LearnOutcome::Failed(LearnFailure {
            bound: max_index,
            max_states,
            states_reached: states,
            rounds,
            reason,
        })
    };

    loop {
        let row = |teacher: &mut Teacher<_>, prefix: &[u8], suffixes: &[Vec<u8>]| -> Vec<bool> {
            suffixes
                .iter()
                .map(|e| {
                    let mut w = prefix.to_vec();
                    w.extend_from_slice(e);
                    teacher.query(&w)
                })
                .collect()
        };

        // Close the table: every one-letter extension of an access word must
        // share a row with some access word.
        let mut rows: HashMap<Vec<bool>, usize> = HashMap::new();
        for (idx, s) in access.iter().enumerate() {
            let r = row(&mut teacher, s, &suffixes);
            rows.entry(r).or_insert(idx);
        }
        let mut delta: Vec<[usize; 2]> = Vec::new();
        let mut idx = 0;
        while idx < access.len() {
            let mut targets = [0usize; 2];
            for bit in 0..2u8 {
                let mut ext = access[idx].clone();
                ext.push(bit);
                let r = row(&mut teacher, &ext, &suffixes);
                targets[bit as usize] = match rows.get(&r) {
                    Some(&q) => q,
                    None => {
                        if access.len() >= max_states {
                            return fail(
                                access.len() + 1,
                                rounds,
                                format!(
                                    "state budget of {max_states} exhausted at bound {max_index}"
                                ),
                            );
                        }
                        let q = access.len();
                        rows.insert(r, q);
                        access.push(ext);
                        q
                    }
                };
            }
            delta.push(targets);
            idx += 1;
        }
        let accepting: Vec<usize> = (0..access.len())
            .filter(|&q| teacher.query(&access[q]))
            .collect();
        let hypothesis = Dfa::new(0, delta, &accepting).expect("table automaton is complete");

        // Bounded-exhaustive equivalence query.
        let counterexample = (1..=max_index).find(|&i| {
            let mut w = Vec::with_capacity(64);
            let len = bit_length(i);
            w.extend((0..len).rev().map(|e| ((i >> e) & 1) as u8));
            hypothesis.accepts(w.iter().copied()) != teacher.query(&w)
        });
        let Some(cex) = counterexample else {
            return LearnOutcome::Learned(LearnedDfa {
                dfa: hypothesis,
                bound: max_index,
                rounds,
                membership_queries: teacher.queries,
                unknown_queries: teacher.unknown,
            });
        };
        rounds += 1;
        let len = bit_length(cex);
        let word: Vec<u8> = (0..len).rev().map(|e| ((cex >> e) & 1) as u8).collect();
        let before = suffixes.len();
        for start in 0..word.len() {
            let suffix = word[start..].to_vec();
            if !suffixes.contains(&suffix) {
                suffixes.push(suffix);
            }
        }
        if suffixes.len() == before {
            return fail(
                access.len(),
                rounds,
                format!("counterexample {cex} added no distinguishing suffix"),
            );
        }
    }
}

/// Membership function for the level `epsilon` of the run count, valid for
/// every index.
pub fn run_count_membership(epsilon: u32) -> impl Fn(u64) -> Option<bool> {
    move |i| Some(runs_of_value(i) == epsilon)
}

/// Membership function backed by a table; indices beyond the table are
/// unknown.
pub fn table_membership(table: &PalLengthTable, epsilon: u32) -> impl Fn(u64) -> Option<bool> + '_ {
    move |i| {
        if i == 0 {
            Some(false)
        } else {
            usize::try_from(i)
                .ok()
                .filter(|&i| i <= table.bound())
                .map(|i| table.get(i) == epsilon)
        }
    }
}
