//! Labelled partial orders with source and target interfaces.
//!
//! Events are addressed by their 0-based position in the event list; interface
//! slots are 1-based like every other position in the crate.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::base_cats::{CanonicalObject, Label, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IpomsetError {
    #[error("interface mismatch: {left} vs {right}")]
    InterfaceMismatch { left: CanonicalObject, right: CanonicalObject },
    #[error("index {index} out of range 1..={arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("ipomset is not interval")]
    NotInterval,
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("invalid ipomset: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Event {
    pub id: String,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ipomset {
    events: Vec<Event>,
    lt: BTreeSet<(usize, usize)>,
    src: Vec<usize>,
    tgt: Vec<usize>,
}

fn canonical_events<'a>(labels: impl IntoIterator<Item = &'a Label>) -> Vec<Event> {
    labels.into_iter().enumerate().map(|(n, l)| Event { id: format!("e{}", n + 1), label: l.clone() }).collect()
}

impl Ipomset {
    /// Raw constructor; nothing is checked or closed.
    pub fn new(
        events: Vec<Event>,
        lt: impl IntoIterator<Item = (usize, usize)>,
        src: Vec<usize>,
        tgt: Vec<usize>,
    ) -> Self {
        Ipomset { events, lt: lt.into_iter().collect(), src, tgt }
    }

    /// Events named `e1, e2, …` with the given labels; `lt` is closed transitively.
    pub fn build(labels: &[&str], lt: &[(usize, usize)], src: &[usize], tgt: &[usize]) -> Self {
        let labels: Vec<Label> = labels.iter().map(|&l| Label::from(l)).collect();
        let mut p = Ipomset::new(canonical_events(&labels), lt.iter().copied(), src.to_vec(), tgt.to_vec());
        p.close();
        p
    }

    fn close(&mut self) {
        let n = self.events.len();
        let mut m = vec![vec![false; n]; n];
        for &(a, b) in &self.lt {
            m[a][b] = true;
        }
        for k in 0..n {
            for a in 0..n {
                if m[a][k] {
                    let row = m[k].clone();
                    for (x, y) in m[a].iter_mut().zip(row) {
                        *x |= y;
                    }
                }
            }
        }
        self.lt = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| m[a][b]).collect();
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn label(&self, e: usize) -> &Label {
        &self.events[e].label
    }

    pub fn lt(&self) -> &BTreeSet<(usize, usize)> {
        &self.lt
    }

    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.lt.contains(&(a, b))
    }

    pub fn src(&self) -> &[usize] {
        &self.src
    }

    pub fn tgt(&self) -> &[usize] {
        &self.tgt
    }

    pub fn source_object(&self) -> CanonicalObject {
        CanonicalObject::new(self.src.iter().map(|&e| self.label(e).clone()).collect())
    }

    pub fn target_object(&self) -> CanonicalObject {
        CanonicalObject::new(self.tgt.iter().map(|&e| self.label(e).clone()).collect())
    }

    /// The same ipomset with events renamed `e1, e2, …` in list order.
    pub fn canonically_named(&self) -> Ipomset {
        Ipomset { events: canonical_events(self.events.iter().map(|e| &e.label)), ..self.clone() }
    }

    /// Covering pairs of the order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.lt
            .iter()
            .copied()
            .filter(|&(a, b)| !(0..self.len()).any(|c| self.precedes(a, c) && self.precedes(c, b)))
            .collect()
    }

    /// Bullet notation: `•a•[e1], •c[e3]` followed by the covering pairs.
    pub fn render_ascii(&self) -> String {
        let name = |e: usize| {
            let pre = if self.src.contains(&e) { "•" } else { "" };
            let post = if self.tgt.contains(&e) { "•" } else { "" };
            format!("{pre}{}{post}[{}]", self.label(e), self.events[e].id)
        };
        let mut out = format!("events: {}", (0..self.len()).map(name).join(", "));
        let covers = self.covers();
        if !covers.is_empty() {
            out.push_str(&format!(
                "\norder: {}",
                covers.iter().map(|&(a, b)| format!("{} --> {}", name(a), name(b))).join(", ")
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IpomsetViolation {
    DuplicateId(String),
    EventOutOfRange(usize),
    Reflexive(usize),
    NotTransitive { a: usize, b: usize, c: usize },
    SourceNotInjective(usize),
    TargetNotInjective(usize),
    SourceNotMinimal(usize),
    TargetNotMaximal(usize),
}

impl fmt::Display for IpomsetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IpomsetViolation::DuplicateId(id) => write!(f, "event id `{id}` is used twice"),
            IpomsetViolation::EventOutOfRange(e) => write!(f, "event index {e} is out of range"),
            IpomsetViolation::Reflexive(e) => write!(f, "event {e} precedes itself"),
            IpomsetViolation::NotTransitive { a, b, c } => {
                write!(f, "{a} < {b} < {c} but not {a} < {c}")
            }
            IpomsetViolation::SourceNotInjective(e) => write!(f, "event {e} fills two source slots"),
            IpomsetViolation::TargetNotInjective(e) => write!(f, "event {e} fills two target slots"),
            IpomsetViolation::SourceNotMinimal(e) => write!(f, "source event {e} is not minimal"),
            IpomsetViolation::TargetNotMaximal(e) => write!(f, "target event {e} is not maximal"),
        }
    }
}

pub fn validate_ipomset(p: &Ipomset) -> Vec<IpomsetViolation> {
    let n = p.len();
    let mut out = Vec::new();
    let mut ids = BTreeSet::new();
    for e in &p.events {
        if !ids.insert(&e.id) {
            out.push(IpomsetViolation::DuplicateId(e.id.clone()));
        }
    }
    for &(a, b) in &p.lt {
        for e in [a, b] {
            if e >= n {
                out.push(IpomsetViolation::EventOutOfRange(e));
            }
        }
        if a == b {
            out.push(IpomsetViolation::Reflexive(a));
        }
    }
    for &e in p.src.iter().chain(&p.tgt) {
        if e >= n {
            out.push(IpomsetViolation::EventOutOfRange(e));
        }
    }
    if !out.is_empty() {
        return out;
    }
    for &(a, b) in &p.lt {
        for &(b2, c) in p.lt.range((b, 0)..(b + 1, 0)) {
            debug_assert_eq!(b2, b);
            if !p.precedes(a, c) {
                out.push(IpomsetViolation::NotTransitive { a, b, c });
            }
        }
    }
    for (side, slots) in [(0, &p.src), (1, &p.tgt)] {
        let mut seen = BTreeSet::new();
        for &e in slots {
            if !seen.insert(e) {
                out.push(if side == 0 {
                    IpomsetViolation::SourceNotInjective(e)
                } else {
                    IpomsetViolation::TargetNotInjective(e)
                });
            }
        }
    }
    for &e in &p.src {
        if (0..n).any(|x| p.precedes(x, e)) {
            out.push(IpomsetViolation::SourceNotMinimal(e));
        }
    }
    for &e in &p.tgt {
        if (0..n).any(|x| p.precedes(e, x)) {
            out.push(IpomsetViolation::TargetNotMaximal(e));
        }
    }
    out
}

/// JSON layout: events with ids and labels, precedence pairs and interfaces by id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IpomsetFile {
    pub events: Vec<Event>,
    #[serde(default)]
    pub lt: Vec<(String, String)>,
    #[serde(default)]
    pub src: Vec<String>,
    #[serde(default)]
    pub tgt: Vec<String>,
}

impl IpomsetFile {
    /// Resolve ids; the relation is closed transitively, everything else is left to validation.
    pub fn into_ipomset(self) -> Result<Ipomset, IpomsetError> {
        let index: HashMap<&str, usize> = self.events.iter().enumerate().map(|(n, e)| (e.id.as_str(), n)).collect();
        let find = |id: &str| index.get(id).copied().ok_or_else(|| IpomsetError::UnknownEvent(id.into()));
        let lt = self.lt.iter().map(|(a, b)| Ok((find(a)?, find(b)?))).collect::<Result<Vec<_>, IpomsetError>>()?;
        let src = self.src.iter().map(|e| find(e)).collect::<Result<_, _>>()?;
        let tgt = self.tgt.iter().map(|e| find(e)).collect::<Result<_, _>>()?;
        let mut p = Ipomset::new(self.events.clone(), lt, src, tgt);
        p.close();
        Ok(p)
    }

    pub fn from_ipomset(p: &Ipomset) -> Self {
        let id = |e: usize| p.events[e].id.clone();
        IpomsetFile {
            events: p.events.clone(),
            lt: p.lt.iter().map(|&(a, b)| (id(a), id(b))).collect(),
            src: p.src.iter().map(|&e| id(e)).collect(),
            tgt: p.tgt.iter().map(|&e| id(e)).collect(),
        }
    }
}

impl Ipomset {
    pub fn from_json(text: &str) -> Result<Self, IpomsetError> {
        let file: IpomsetFile = serde_json::from_str(text).map_err(|e| IpomsetError::Invalid(e.to_string()))?;
        file.into_ipomset()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(IpomsetFile::from_ipomset(self)).expect("serialisable")
    }
}

pub fn make_identity(u: &CanonicalObject) -> Ipomset {
    let all: Vec<usize> = (0..u.arity()).collect();
    Ipomset::new(canonical_events(u.labels()), [], all.clone(), all)
}

/// `(ι_i, U, id)`: every event ends in the target, event `i` has no source slot.
pub fn make_starter(u: &CanonicalObject, i: usize) -> Result<Ipomset, IpomsetError> {
    let n = u.arity();
    if i == 0 || i > n {
        return Err(IpomsetError::IndexOutOfRange { index: i, arity: n });
    }
    let src = (0..n).filter(|&e| e != i - 1).collect();
    Ok(Ipomset::new(canonical_events(u.labels()), [], src, (0..n).collect()))
}

/// `(id, U, ι_i)`: every event is in the source, event `i` has no target slot.
pub fn make_terminator(u: &CanonicalObject, i: usize) -> Result<Ipomset, IpomsetError> {
    let n = u.arity();
    if i == 0 || i > n {
        return Err(IpomsetError::IndexOutOfRange { index: i, arity: n });
    }
    let tgt = (0..n).filter(|&e| e != i - 1).collect();
    Ok(Ipomset::new(canonical_events(u.labels()), [], (0..n).collect(), tgt))
}

/// Slotwise gluing: target slot `i` of `p` is identified with source slot `i` of `q`.
/// Events of the result are `p`'s, then `q`'s non-source events, named `e1, e2, …`.
pub fn glue(p: &Ipomset, q: &Ipomset) -> Result<Ipomset, IpomsetError> {
    let (left, right) = (p.target_object(), q.source_object());
    if left != right {
        return Err(IpomsetError::InterfaceMismatch { left, right });
    }
    let mut map = vec![usize::MAX; q.len()];
    for (slot, &e) in q.src.iter().enumerate() {
        map[e] = p.tgt[slot];
    }
    let mut labels: Vec<Label> = p.events.iter().map(|e| e.label.clone()).collect();
    let mut fresh = Vec::new();
    for (e, slot) in map.iter_mut().enumerate() {
        if *slot == usize::MAX {
            *slot = labels.len();
            labels.push(q.label(e).clone());
            fresh.push(*slot);
        }
    }
    let p_rest: Vec<usize> = (0..p.len()).filter(|e| !p.tgt.contains(e)).collect();
    let mut lt: BTreeSet<(usize, usize)> = p.lt.clone();
    lt.extend(q.lt.iter().map(|&(a, b)| (map[a], map[b])));
    lt.extend(p_rest.iter().flat_map(|&a| fresh.iter().map(move |&b| (a, b))));
    let mut out = Ipomset::new(canonical_events(&labels), lt, p.src.clone(), q.tgt.iter().map(|&e| map[e]).collect());
    out.close();
    debug_assert!(out.lt.iter().all(|&(a, b)| a != b), "gluing created a cycle");
    Ok(out)
}

/// Interval orders are exactly those whose strict down-sets form a chain under inclusion.
pub fn is_interval(p: &Ipomset) -> bool {
    let n = p.len();
    let downs: Vec<BTreeSet<usize>> = (0..n).map(|b| (0..n).filter(|&a| p.precedes(a, b)).collect()).collect();
    downs.iter().tuple_combinations().all(|(x, y)| x.is_subset(y) || y.is_subset(x))
}

/// A list of discrete ipomsets (single starts and terminations, or one identity)
/// whose gluing is isomorphic to `p`.
///
/// Events are swept greedily: start everything whose predecessors have ended,
/// then end everything that precedes every unstarted event.
pub fn decompose_discrete(p: &Ipomset) -> Result<Vec<Ipomset>, IpomsetError> {
    if let Some(v) = validate_ipomset(p).first() {
        return Err(IpomsetError::Invalid(v.to_string()));
    }
    let n = p.len();
    let tgt_slot: HashMap<usize, usize> = p.tgt.iter().enumerate().map(|(s, &e)| (e, s)).collect();
    let rank = |e: usize| tgt_slot.get(&e).copied().unwrap_or(n + e);
    let mut active: Vec<usize> = p.src.clone();
    let mut ended = vec![false; n];
    let mut waiting: BTreeSet<usize> = (0..n).filter(|e| !p.src.contains(e)).collect();
    let labels_of = |active: &[usize]| CanonicalObject::new(active.iter().map(|&e| p.label(e).clone()).collect());
    let mut factors = Vec::new();
    loop {
        let mut progressed = false;
        let ready: Vec<usize> =
            waiting.iter().copied().filter(|&e| (0..n).all(|a| !p.precedes(a, e) || ended[a])).collect();
        for e in ready {
            waiting.remove(&e);
            let pos = active.iter().filter(|&&a| rank(a) < rank(e)).count();
            active.insert(pos, e);
            factors.push(make_starter(&labels_of(&active), pos + 1)?);
            progressed = true;
        }
        let finishing: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&e| !tgt_slot.contains_key(&e) && waiting.iter().all(|&w| p.precedes(e, w)))
            .collect();
        for e in finishing {
            let pos = active.iter().position(|&a| a == e).expect("active");
            factors.push(make_terminator(&labels_of(&active), pos + 1)?);
            active.remove(pos);
            ended[e] = true;
            progressed = true;
        }
        if waiting.is_empty() && active.iter().all(|e| tgt_slot.contains_key(e)) {
            break;
        }
        if !progressed {
            return Err(IpomsetError::NotInterval);
        }
    }
    if factors.is_empty() {
        factors.push(make_identity(&p.source_object()));
    }
    Ok(factors)
}

/// Left-to-right gluing of a nonempty list.
pub fn glue_all(parts: &[Ipomset]) -> Result<Ipomset, IpomsetError> {
    let (first, rest) = parts.split_first().ok_or_else(|| IpomsetError::Invalid("nothing to glue".into()))?;
    rest.iter().try_fold(first.clone(), |acc, q| glue(&acc, q))
}

/// An isomorphism: `events[e]` is the image of event `e`, `source[s]`/`target[s]` the
/// image of interface slot `s` (as permutations of the slots).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpomsetIso {
    pub events: Vec<usize>,
    pub source: Permutation,
    pub target: Permutation,
}

impl IpomsetIso {
    pub fn inverse(&self) -> IpomsetIso {
        let mut events = vec![0; self.events.len()];
        for (e, &f) in self.events.iter().enumerate() {
            events[f] = e;
        }
        IpomsetIso { events, source: self.source.inverse(), target: self.target.inverse() }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &IpomsetIso) -> IpomsetIso {
        IpomsetIso {
            events: self.events.iter().map(|&e| other.events[e]).collect(),
            source: other.source.compose(&self.source).expect("same arity"),
            target: other.target.compose(&self.target).expect("same arity"),
        }
    }

    /// True iff this is an isomorphism `p → q` in the loose sense.
    pub fn is_iso(&self, p: &Ipomset, q: &Ipomset) -> bool {
        let n = p.len();
        if q.len() != n || self.events.len() != n || self.events.iter().collect::<BTreeSet<_>>().len() != n {
            return false;
        }
        let f = &self.events;
        (0..n).all(|e| f[e] < n && p.label(e) == q.label(f[e]))
            && (0..n).all(|a| (0..n).all(|b| p.precedes(a, b) == q.precedes(f[a], f[b])))
            && p.src.len() == q.src.len()
            && p.tgt.len() == q.tgt.len()
            && self.source.arity() == p.src.len()
            && self.target.arity() == p.tgt.len()
            && (1..=p.src.len()).all(|s| f[p.src[s - 1]] == q.src[self.source.apply(s) - 1])
            && (1..=p.tgt.len()).all(|s| f[p.tgt[s - 1]] == q.tgt[self.target.apply(s) - 1])
    }

    /// True iff every interface slot is sent to the same slot.
    pub fn preserves_slots(&self) -> bool {
        self.source.is_identity() && self.target.is_identity()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Signature {
    label: Label,
    below: usize,
    above: usize,
    src: Option<usize>,
    tgt: Option<usize>,
}

fn signatures(p: &Ipomset, strict: bool) -> Vec<Signature> {
    let n = p.len();
    (0..n)
        .map(|e| {
            let slot = |side: &[usize]| side.iter().position(|&x| x == e).map(|s| if strict { s + 1 } else { 0 });
            Signature {
                label: p.label(e).clone(),
                below: (0..n).filter(|&a| p.precedes(a, e)).count(),
                above: (0..n).filter(|&b| p.precedes(e, b)).count(),
                src: slot(&p.src),
                tgt: slot(&p.tgt),
            }
        })
        .collect()
}

/// An isomorphism-invariant fingerprint; equal for isomorphic ipomsets.
pub fn iso_invariant(p: &Ipomset) -> Vec<(Label, usize, usize, bool, bool)> {
    let mut sig: Vec<_> = signatures(p, false)
        .into_iter()
        .map(|s| (s.label, s.below, s.above, s.src.is_some(), s.tgt.is_some()))
        .collect();
    sig.sort();
    sig
}

fn search(p: &Ipomset, q: &Ipomset, strict: bool, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let n = p.len();
    if q.len() != n || p.src.len() != q.src.len() || p.tgt.len() != q.tgt.len() || p.lt.len() != q.lt.len() {
        return;
    }
    let (sp, sq) = (signatures(p, strict), signatures(q, strict));
    let mut classes: BTreeMap<&Signature, Vec<usize>> = BTreeMap::new();
    for (e, s) in sq.iter().enumerate() {
        classes.entry(s).or_default().push(e);
    }
    let mut candidates = Vec::with_capacity(n);
    for s in &sp {
        match classes.get(s) {
            Some(c) => candidates.push(c.clone()),
            None => return,
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&e| candidates[e].len());
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    #[allow(clippy::too_many_arguments)]
    fn go(
        depth: usize,
        order: &[usize],
        candidates: &[Vec<usize>],
        p: &Ipomset,
        q: &Ipomset,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == order.len() {
            return visit(image);
        }
        let e = order[depth];
        for &c in &candidates[e] {
            if used[c] {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&u| p.precedes(u, e) == q.precedes(image[u], c) && p.precedes(e, u) == q.precedes(c, image[u]));
            if !consistent {
                continue;
            }
            image[e] = c;
            used[c] = true;
            let keep_going = go(depth + 1, order, candidates, p, q, image, used, visit);
            used[c] = false;
            image[e] = usize::MAX;
            if !keep_going {
                return false;
            }
        }
        true
    }
    go(0, &order, &candidates, p, q, &mut image, &mut used, visit);
}

fn witness(p: &Ipomset, q: &Ipomset, events: &[usize]) -> IpomsetIso {
    let slot_map = |from: &[usize], to: &[usize]| {
        let images =
            from.iter().map(|&e| to.iter().position(|&x| x == events[e]).expect("interface preserved") + 1).collect();
        Permutation::from_one_line(images).expect("bijective")
    };
    IpomsetIso { events: events.to_vec(), source: slot_map(&p.src, &q.src), target: slot_map(&p.tgt, &q.tgt) }
}

/// Some isomorphism `p → q`, where interface slots may be permuted.
pub fn iso(p: &Ipomset, q: &Ipomset) -> Option<IpomsetIso> {
    first_iso(p, q, false)
}

/// Some isomorphism `p → q` that fixes every interface slot.
pub fn iso_strict(p: &Ipomset, q: &Ipomset) -> Option<IpomsetIso> {
    first_iso(p, q, true)
}

fn first_iso(p: &Ipomset, q: &Ipomset, strict: bool) -> Option<IpomsetIso> {
    let mut found = None;
    search(p, q, strict, &mut |f| {
        found = Some(f.to_vec());
        false
    });
    found.map(|f| witness(p, q, &f))
}

/// Every isomorphism `p → q`.
pub fn all_isos(p: &Ipomset, q: &Ipomset, strict: bool) -> Vec<IpomsetIso> {
    let mut out = Vec::new();
    search(p, q, strict, &mut |f| {
        out.push(f.to_vec());
        true
    });
    out.into_iter().map(|f| witness(p, q, &f)).collect()
}

pub fn count_isos(p: &Ipomset, q: &Ipomset, strict: bool) -> usize {
    let mut count = 0;
    search(p, q, strict, &mut |_| {
        count += 1;
        true
    });
    count
}
