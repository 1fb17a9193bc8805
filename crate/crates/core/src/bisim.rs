//! ST-, hp- and hhp-bisimulation on finite HDAs, with clause 2 decided either by
//! ST-trace equality or by isomorphism of ipomset labels.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde_json::json;
use thiserror::Error;

use crate::base_cats::Label;
use crate::ipomset::{iso, iso_invariant, Ipomset};
use crate::paths::{adjacent_paths, format_path, successors, Path};
use crate::precubical::{CellRef, Hda};
use crate::semantics::{ev, st_trace, StTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BisimKind {
    St,
    Hp,
    Hhp,
}

impl BisimKind {
    pub const ALL: [BisimKind; 3] = [BisimKind::St, BisimKind::Hp, BisimKind::Hhp];

    fn adjacency(self) -> bool {
        self != BisimKind::St
    }

    fn prefixes(self) -> bool {
        self == BisimKind::Hhp
    }
}

impl fmt::Display for BisimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BisimKind::St => "st",
            BisimKind::Hp => "hp",
            BisimKind::Hhp => "hhp",
        })
    }
}

impl FromStr for BisimKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "st" => Ok(BisimKind::St),
            "hp" => Ok(BisimKind::Hp),
            "hhp" => Ok(BisimKind::Hhp),
            _ => Err(format!("unknown kind `{s}` (expected st, hp or hhp)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemanticsMode {
    TraceBased,
    IpomsetBased,
}

impl fmt::Display for SemanticsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SemanticsMode::TraceBased => "trace",
            SemanticsMode::IpomsetBased => "ipomset",
        })
    }
}

impl FromStr for SemanticsMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "trace" => Ok(SemanticsMode::TraceBased),
            "ipomset" => Ok(SemanticsMode::IpomsetBased),
            _ => Err(format!("unknown mode `{s}` (expected trace or ipomset)")),
        }
    }
}

/// A relation between executions, as pairs of indices into `left` and `right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub left: Vec<Path<CellRef>>,
    pub right: Vec<Path<CellRef>>,
    pub pairs: Vec<(usize, usize)>,
}

impl Witness {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn path_pairs(&self) -> impl Iterator<Item = (&Path<CellRef>, &Path<CellRef>)> {
        self.pairs.iter().map(|&(a, b)| (&self.left[a], &self.right[b]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Bisimilar(Witness),
    NotBisimilar,
    BoundedInconclusive(usize),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Bisimilar(_) => "Bisimilar",
            Verdict::NotBisimilar => "NotBisimilar",
            Verdict::BoundedInconclusive(_) => "BoundedInconclusive",
        }
    }

    pub fn is_bisimilar(&self) -> bool {
        matches!(self, Verdict::Bisimilar(_))
    }

    pub fn is_conclusive(&self) -> bool {
        !matches!(self, Verdict::BoundedInconclusive(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisimReport {
    pub verdict: Verdict,
    pub kind: BisimKind,
    pub mode: SemanticsMode,
    pub bound: usize,
    /// Paths `(left, right)` where one side has a move the other cannot answer.
    pub counterexample_pair: Option<(String, String)>,
}

impl BisimReport {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "verdict": self.verdict.name(),
            "kind": self.kind.to_string(),
            "mode": self.mode.to_string(),
            "bound": self.bound,
        });
        if let Verdict::Bisimilar(w) = &self.verdict {
            v["witness_size"] = json!(w.len());
        }
        if let Some((a, b)) = &self.counterexample_pair {
            v["counterexample_pair"] = json!([a, b]);
        }
        v
    }
}

/// All executions of length at most `max_len`, shortest first, each length in
/// successor order.
pub fn enumerate_executions(h: &Hda, max_len: usize) -> Vec<Path<CellRef>> {
    let mut out = vec![Path::single(h.initial)];
    let mut frontier = 0;
    for _ in 0..max_len {
        let end = out.len();
        for k in frontier..end {
            for (step, next) in successors(&h.complex, *out[k].last()) {
                let p = out[k].extended(step, next);
                out.push(p);
            }
        }
        frontier = end;
    }
    out
}

/// Length of the longest execution, or `None` when the reachable step graph has a
/// cycle.
pub fn longest_execution(h: &Hda) -> Option<usize> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Open,
        Done(usize),
    }
    let x = &h.complex;
    let mut marks = vec![Mark::Fresh; x.len()];
    let mut stack: Vec<(CellRef, usize)> = vec![(h.initial, 0)];
    marks[h.initial.0] = Mark::Open;
    while let Some(&mut (cell, ref mut next)) = stack.last_mut() {
        let succ = successors(x, cell);
        if let Some(&(_, c)) = succ.get(*next) {
            *next += 1;
            match marks[c.0] {
                Mark::Open => return None,
                Mark::Fresh => {
                    marks[c.0] = Mark::Open;
                    stack.push((c, 0));
                }
                Mark::Done(_) => {}
            }
        } else {
            let best = succ
                .iter()
                .map(|(_, c)| match marks[c.0] {
                    Mark::Done(n) => n + 1,
                    _ => unreachable!("children are finished"),
                })
                .max()
                .unwrap_or(0);
            marks[cell.0] = Mark::Done(best);
            stack.pop();
        }
    }
    match marks[h.initial.0] {
        Mark::Done(n) => Some(n),
        _ => unreachable!(),
    }
}

struct Side<'a> {
    h: &'a Hda,
    paths: Vec<Path<CellRef>>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    /// `(ℓ, id)` for every adjacent execution.
    adj: Vec<Vec<(usize, usize)>>,
}

impl<'a> Side<'a> {
    fn new(h: &'a Hda, max_len: usize, with_adjacency: bool) -> Self {
        let paths = enumerate_executions(h, max_len);
        let index: HashMap<&Path<CellRef>, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut parent = vec![None; paths.len()];
        let mut children = vec![Vec::new(); paths.len()];
        for (i, p) in paths.iter().enumerate().skip(1) {
            let up = index[&p.prefix(p.len() - 1)];
            parent[i] = Some(up);
            children[up].push(i);
        }
        let adj = paths
            .iter()
            .map(|p| {
                if !with_adjacency {
                    return Vec::new();
                }
                (1..p.len())
                    .flat_map(|l| adjacent_paths(&h.complex, p, l).into_iter().map(move |(q, _)| (l, q)))
                    .map(|(l, q)| (l, index[&q]))
                    .collect()
            })
            .collect();
        Side { h, paths, parent, children, adj }
    }

    fn text(&self, id: usize) -> String {
        format_path(&self.h.complex, &self.paths[id])
    }
}

type IsoKey = Vec<(Label, usize, usize, bool, bool)>;

/// Assigns equal class ids to executions (on either side) related by clause 2.
struct Classifier {
    mode: SemanticsMode,
    traces: HashMap<StTrace, usize>,
    buckets: HashMap<(usize, IsoKey), Vec<(Ipomset, usize)>>,
    next: usize,
}

impl Classifier {
    fn new(mode: SemanticsMode) -> Self {
        Classifier { mode, traces: HashMap::new(), buckets: HashMap::new(), next: 0 }
    }

    fn class(&mut self, h: &Hda, p: &Path<CellRef>) -> usize {
        let fresh = self.next;
        let id = match self.mode {
            SemanticsMode::TraceBased => {
                let t = st_trace(&h.complex, p).expect("executions have traces");
                *self.traces.entry(t).or_insert(fresh)
            }
            SemanticsMode::IpomsetBased => {
                let label = ev(&h.complex, p).expect("executions are valid paths");
                let reps = self.buckets.entry((p.len(), iso_invariant(&label))).or_default();
                match reps.iter().find(|(r, _)| iso(r, &label).is_some()) {
                    Some(&(_, c)) => c,
                    None => {
                        reps.push((label, fresh));
                        fresh
                    }
                }
            }
        };
        if id == fresh {
            self.next += 1;
        }
        id
    }
}

#[derive(Debug, Clone, Copy)]
enum Blame {
    /// The left execution has no answer from the right one.
    Left(usize, usize),
    Right(usize, usize),
}

/// Greatest fixpoint over length-matched pairs of executions of length at most
/// `max_len`. Moves that would leave the bound are not checked.
pub fn check_bisim(hx: &Hda, hy: &Hda, kind: BisimKind, mode: SemanticsMode, max_len: usize) -> BisimReport {
    let left = Side::new(hx, max_len, kind.adjacency());
    let right = Side::new(hy, max_len, kind.adjacency());

    let mut classifier = Classifier::new(mode);
    let lclass: Vec<usize> = left.paths.iter().map(|p| classifier.class(hx, p)).collect();
    let rclass: Vec<usize> = right.paths.iter().map(|p| classifier.class(hy, p)).collect();
    let mut by_class: HashMap<usize, Vec<usize>> = HashMap::new();
    for (b, &c) in rclass.iter().enumerate() {
        by_class.entry(c).or_default().push(b);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (a, c) in lclass.iter().enumerate() {
        for &b in by_class.get(c).map(Vec::as_slice).unwrap_or(&[]) {
            pairs.push((a, b));
        }
    }
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut alive = vec![true; pairs.len()];
    let mut blame: Vec<Option<Blame>> = vec![None; pairs.len()];

    let related = |alive: &[bool], a: usize, b: usize| index.get(&(a, b)).is_some_and(|&i| alive[i]);
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..pairs.len() {
            if !alive[i] {
                continue;
            }
            let (a, b) = pairs[i];
            let mut fail = None;
            if let Some(&a2) =
                left.children[a].iter().find(|&&a2| !right.children[b].iter().any(|&b2| related(&alive, a2, b2)))
            {
                fail = Some(Blame::Left(a2, b));
            } else if let Some(&b2) =
                right.children[b].iter().find(|&&b2| !left.children[a].iter().any(|&a2| related(&alive, a2, b2)))
            {
                fail = Some(Blame::Right(a, b2));
            } else if kind.adjacency() {
                let answer =
                    |l: usize, a2: usize| right.adj[b].iter().any(|&(m, b2)| m == l && related(&alive, a2, b2));
                let answer_back =
                    |l: usize, b2: usize| left.adj[a].iter().any(|&(m, a2)| m == l && related(&alive, a2, b2));
                if let Some(&(_, a2)) = left.adj[a].iter().find(|&&(l, a2)| !answer(l, a2)) {
                    fail = Some(Blame::Left(a2, b));
                } else if let Some(&(_, b2)) = right.adj[b].iter().find(|&&(l, b2)| !answer_back(l, b2)) {
                    fail = Some(Blame::Right(a, b2));
                }
            }
            if fail.is_none() && kind.prefixes() {
                if let (Some(pa), Some(pb)) = (left.parent[a], right.parent[b]) {
                    if !related(&alive, pa, pb) {
                        fail = Some(Blame::Left(a, b));
                    }
                }
            }
            if fail.is_some() {
                alive[i] = false;
                blame[i] = fail;
                changed = true;
            }
        }
    }

    let exhausted = [hx, hy].iter().all(|h| longest_execution(h).is_some_and(|n| n <= max_len));
    let initial = index.get(&(0, 0)).copied();
    let survived = initial.is_some_and(|i| alive[i]);
    let counterexample_pair = match initial {
        None => Some((left.text(0), right.text(0))),
        Some(i) => blame[i].map(|bl| match bl {
            Blame::Left(a, b) | Blame::Right(a, b) => (left.text(a), right.text(b)),
        }),
    };
    let verdict = match (survived, exhausted) {
        (true, true) => Verdict::Bisimilar(Witness {
            pairs: pairs.iter().zip(&alive).filter(|(_, &ok)| ok).map(|(&p, _)| p).collect(),
            left: left.paths,
            right: right.paths,
        }),
        (false, true) => Verdict::NotBisimilar,
        (_, false) => Verdict::BoundedInconclusive(max_len),
    };
    BisimReport { verdict, kind, mode, bound: max_len, counterexample_pair }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} verdicts disagree at bound {bound}: trace mode {trace}, ipomset mode {ipomset}")]
pub struct TheoremViolation {
    pub kind: BisimKind,
    pub bound: usize,
    pub trace: String,
    pub ipomset: String,
    /// The counterexample reported by whichever mode rejected.
    pub pair: Option<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossReport {
    pub trace: BisimReport,
    pub ipomset: BisimReport,
}

/// Runs both modes and requires equal conclusive verdicts.
pub fn cross_validate(hx: &Hda, hy: &Hda, kind: BisimKind, max_len: usize) -> Result<CrossReport, TheoremViolation> {
    let trace = check_bisim(hx, hy, kind, SemanticsMode::TraceBased, max_len);
    let ipomset = check_bisim(hx, hy, kind, SemanticsMode::IpomsetBased, max_len);
    let (t, i) = (&trace.verdict, &ipomset.verdict);
    if t.is_conclusive() && i.is_conclusive() && t.is_bisimilar() != i.is_bisimilar() {
        let rejecting = if t.is_bisimilar() { &ipomset } else { &trace };
        return Err(TheoremViolation {
            kind,
            bound: max_len,
            trace: t.name().into(),
            ipomset: i.name().into(),
            pair: rejecting.counterexample_pair.clone(),
        });
    }
    Ok(CrossReport { trace, ipomset })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessViolation {
    #[error("the initial pair is missing")]
    MissingInitial,
    #[error("({0}, {1}) are not executions of equal length within the bound")]
    NotExecutions(String, String),
    #[error("({0}, {1}) have different observations")]
    Observation(String, String),
    #[error("extension {0} of a related path has no related answer")]
    Extension(String),
    #[error("adjacent path {0} has no related answer")]
    Adjacency(String),
    #[error("prefixes of ({0}, {1}) are not related")]
    Prefix(String, String),
}

/// Checks every clause of `kind` directly on the path pairs of `w`.
pub fn validate_witness(
    hx: &Hda,
    hy: &Hda,
    kind: BisimKind,
    mode: SemanticsMode,
    max_len: usize,
    w: &Witness,
) -> Vec<WitnessViolation> {
    let (x, y) = (&hx.complex, &hy.complex);
    let rel: HashSet<(&Path<CellRef>, &Path<CellRef>)> = w.path_pairs().collect();
    let mut out = Vec::new();
    if !rel.contains(&(&Path::single(hx.initial), &Path::single(hy.initial))) {
        out.push(WitnessViolation::MissingInitial);
    }
    let name = |p: &Path<CellRef>, q: &Path<CellRef>| (format_path(x, p), format_path(y, q));
    let related = |p: &Path<CellRef>, q: &Path<CellRef>| rel.contains(&(p, q));
    for (p, q) in w.path_pairs() {
        let executions = p.first() == &hx.initial
            && q.first() == &hy.initial
            && p.len() == q.len()
            && p.len() <= max_len
            && crate::paths::is_valid_path(x, p)
            && crate::paths::is_valid_path(y, q);
        if !executions {
            let (a, b) = name(p, q);
            out.push(WitnessViolation::NotExecutions(a, b));
            continue;
        }
        let same = match mode {
            SemanticsMode::TraceBased => st_trace(x, p).ok() == st_trace(y, q).ok(),
            SemanticsMode::IpomsetBased => iso(&ev(x, p).unwrap(), &ev(y, q).unwrap()).is_some(),
        };
        if !same {
            let (a, b) = name(p, q);
            out.push(WitnessViolation::Observation(a, b));
        }
        if p.len() < max_len {
            let qs: Vec<Path<CellRef>> = successors(y, *q.last()).into_iter().map(|(s, c)| q.extended(s, c)).collect();
            let ps: Vec<Path<CellRef>> = successors(x, *p.last()).into_iter().map(|(s, c)| p.extended(s, c)).collect();
            for p2 in &ps {
                if !qs.iter().any(|q2| related(p2, q2)) {
                    out.push(WitnessViolation::Extension(format_path(x, p2)));
                }
            }
            for q2 in &qs {
                if !ps.iter().any(|p2| related(p2, q2)) {
                    out.push(WitnessViolation::Extension(format_path(y, q2)));
                }
            }
        }
        if kind.adjacency() {
            for l in 1..p.len() {
                let ps = adjacent_paths(x, p, l);
                let qs = adjacent_paths(y, q, l);
                for (p2, _) in &ps {
                    if !qs.iter().any(|(q2, _)| related(p2, q2)) {
                        out.push(WitnessViolation::Adjacency(format_path(x, p2)));
                    }
                }
                for (q2, _) in &qs {
                    if !ps.iter().any(|(p2, _)| related(p2, q2)) {
                        out.push(WitnessViolation::Adjacency(format_path(y, q2)));
                    }
                }
            }
        }
        if kind.prefixes() {
            for k in 0..p.len() {
                if !related(&p.prefix(k), &q.prefix(k)) {
                    let (a, b) = name(p, q);
                    out.push(WitnessViolation::Prefix(a, b));
                    break;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn executions_of_small_complexes() {
        assert_eq!(enumerate_executions(&fixtures::single_vertex(), 5).len(), 1);
        let sq = fixtures::filled_square("a", "b");
        let by_len: Vec<usize> =
            (0..=4).map(|n| enumerate_executions(&sq, 4).iter().filter(|p| p.len() == n).count()).collect();
        assert_eq!(by_len, [1, 2, 4, 6, 6]);
        assert_eq!(enumerate_executions(&sq, 9).len(), 19);
        assert_eq!(longest_execution(&sq), Some(4));
        assert_eq!(longest_execution(&fixtures::cube(["a", "b", "c"])), Some(6));
    }

    /// Brute force: every successor chain from the initial cell.
    fn count_by_dfs(h: &Hda, cell: CellRef, depth: usize) -> usize {
        1 + if depth == 0 {
            0
        } else {
            successors(&h.complex, cell).into_iter().map(|(_, c)| count_by_dfs(h, c, depth - 1)).sum()
        }
    }

    #[test]
    fn execution_counts_match_dfs() {
        for h in [fixtures::two_squares(), fixtures::two_cubes(), fixtures::cube_skeleton()] {
            for n in 0..=6 {
                assert_eq!(enumerate_executions(&h, n).len(), count_by_dfs(&h, h.initial, n));
            }
        }
    }

    #[test]
    fn cycles_have_no_longest_execution() {
        use crate::precubical::{CellSpec, PrecubicalSet};
        let x = PrecubicalSet::from_specs(
            [crate::base_cats::Label::from("a")],
            vec![CellSpec::vertex("v"), CellSpec::new("e", &["a"], &["v"], &["v"])],
        )
        .unwrap();
        let h = Hda::new(x, "v").unwrap();
        assert_eq!(longest_execution(&h), None);
        let r = check_bisim(&h, &h, BisimKind::Hhp, SemanticsMode::TraceBased, 4);
        assert_eq!(r.verdict, Verdict::BoundedInconclusive(4));
    }

    #[test]
    fn self_comparison() {
        for h in [fixtures::filled_square("a", "b"), fixtures::two_squares(), fixtures::single_edge("a")] {
            for kind in BisimKind::ALL {
                for mode in [SemanticsMode::TraceBased, SemanticsMode::IpomsetBased] {
                    let r = check_bisim(&h, &h, kind, mode, 6);
                    let Verdict::Bisimilar(w) = &r.verdict else { panic!("{kind} {mode}: {:?}", r.verdict) };
                    assert!(validate_witness(&h, &h, kind, mode, 6, w).is_empty());
                }
            }
        }
    }

    #[test]
    fn filled_and_hollow_squares_differ() {
        let (f, h) = (fixtures::filled_square("a", "b"), fixtures::hollow_square("a", "b"));
        for kind in BisimKind::ALL {
            for mode in [SemanticsMode::TraceBased, SemanticsMode::IpomsetBased] {
                let r = check_bisim(&f, &h, kind, mode, 4);
                assert_eq!(r.verdict, Verdict::NotBisimilar, "{kind} {mode}");
                assert!(r.counterexample_pair.is_some());
                let back = check_bisim(&h, &f, kind, mode, 4);
                assert_eq!(back.verdict, Verdict::NotBisimilar);
            }
        }
    }

    #[test]
    fn truncated_search_is_inconclusive() {
        let (f, h) = (fixtures::filled_square("a", "b"), fixtures::hollow_square("a", "b"));
        let r = check_bisim(&f, &h, BisimKind::St, SemanticsMode::TraceBased, 3);
        assert_eq!(r.verdict, Verdict::BoundedInconclusive(3));
    }

    #[test]
    fn swapped_square_modes() {
        let (ab, ba) = (fixtures::filled_square("a", "b"), fixtures::filled_square("b", "a"));
        for kind in BisimKind::ALL {
            let r = check_bisim(&ab, &ba, kind, SemanticsMode::IpomsetBased, 6);
            let Verdict::Bisimilar(w) = &r.verdict else { panic!("{kind}: {:?}", r.verdict) };
            assert!(validate_witness(&ab, &ba, kind, SemanticsMode::IpomsetBased, 6, w).is_empty());
            let report = cross_validate(&ab, &ba, kind, 6).unwrap();
            assert!(report.trace.verdict.is_bisimilar());
        }
    }

    #[test]
    fn witness_validator_catches_missing_pairs() {
        let sq = fixtures::filled_square("a", "b");
        let r = check_bisim(&sq, &sq, BisimKind::Hhp, SemanticsMode::TraceBased, 4);
        let Verdict::Bisimilar(mut w) = r.verdict else { panic!() };
        let longest = w.pairs.iter().position(|&(a, _)| w.left[a].len() == 2).unwrap();
        w.pairs.remove(longest);
        assert!(!validate_witness(&sq, &sq, BisimKind::Hhp, SemanticsMode::TraceBased, 4, &w).is_empty());
        w.pairs.retain(|&(a, _)| a != 0);
        assert!(validate_witness(&sq, &sq, BisimKind::St, SemanticsMode::TraceBased, 4, &w)
            .contains(&WitnessViolation::MissingInitial));
    }

    #[test]
    fn report_json_fields() {
        let (f, h) = (fixtures::filled_square("a", "b"), fixtures::hollow_square("a", "b"));
        let v = check_bisim(&f, &h, BisimKind::St, SemanticsMode::IpomsetBased, 4).to_json();
        assert_eq!(v["verdict"], "NotBisimilar");
        assert_eq!(v["kind"], "st");
        assert_eq!(v["mode"], "ipomset");
        assert_eq!(v["bound"], 4);
        assert!(v["counterexample_pair"].is_array());
        assert!("HHP".parse::<BisimKind>().is_ok() && "x".parse::<SemanticsMode>().is_err());
    }
}
