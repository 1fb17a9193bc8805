//! Observable content of paths: split- and ST-traces, ipomset labels, and the
//! constructions that move between paths with equal observations.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use thiserror::Error;

use crate::base_cats::{CanonicalObject, Label, Permutation};
use crate::ipomset::{all_isos, glue, iso, iso_strict, make_identity, make_starter, make_terminator, Ipomset};
use crate::paths::{adjacent_replace, underlying_path, validate_path, Path, Step};
use crate::precubical::{symmetrize, CellRef, Complex, PrecubicalSet, SCell, Symmetrization};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("path does not start at a 0-cell")]
    NotAnExecution,
    #[error("labels are not isomorphic")]
    NotIsomorphic,
    #[error("no lifting realises the ipomset: {0}")]
    Unrealizable(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("{0}")]
    Complex(#[from] crate::precubical::ComplexError),
    #[error("bad trace: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SplitTrace(pub Vec<(Label, Sign)>);

impl fmt::Display for SplitTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens = self.0.iter().map(|(l, s)| format!("{l}{}", if *s == Sign::Plus { '+' } else { '-' }));
        f.write_str(&tokens.format(" ").to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StEvent {
    Start(Label),
    /// Termination of the event started at 1-based step `start`.
    Term {
        label: Label,
        start: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct StTrace(pub Vec<StEvent>);

impl fmt::Display for StTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens = self.0.iter().map(|e| match e {
            StEvent::Start(l) => format!("{l}+"),
            StEvent::Term { label, start } => format!("{label}-@{start}"),
        });
        f.write_str(&tokens.format(" ").to_string())
    }
}

impl FromStr for StTrace {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, SemanticsError> {
        let mut events = Vec::new();
        let mut starts = BTreeSet::new();
        for (n, tok) in s.split_whitespace().enumerate() {
            let bad = || SemanticsError::Parse(format!("token {} `{tok}`", n + 1));
            if let Some(label) = tok.strip_suffix('+') {
                if label.is_empty() {
                    return Err(bad());
                }
                events.push(StEvent::Start(Label::from(label)));
            } else {
                let (label, start) = tok.split_once("-@").ok_or_else(bad)?;
                let start: usize = start.parse().map_err(|_| bad())?;
                let matches = start >= 1
                    && start <= events.len()
                    && events[start - 1] == StEvent::Start(Label::from(label))
                    && starts.insert(start);
                if !matches {
                    return Err(bad());
                }
                events.push(StEvent::Term { label: Label::from(label), start });
            }
        }
        Ok(StTrace(events))
    }
}

fn check_path<X: Complex>(cx: &X, p: &Path<X::Cell>) -> Result<(), SemanticsError> {
    match validate_path(cx, p, None).first() {
        Some(v) => Err(SemanticsError::InvalidPath(v.to_string())),
        None => Ok(()),
    }
}

fn check_execution<X: Complex>(cx: &X, p: &Path<X::Cell>) -> Result<(), SemanticsError> {
    check_path(cx, p)?;
    if cx.dim(p.first()) != 0 {
        return Err(SemanticsError::NotAnExecution);
    }
    Ok(())
}

fn object<X: Complex>(cx: &X, c: &X::Cell) -> CanonicalObject {
    CanonicalObject::new(cx.labels(c).into_owned())
}

/// The discrete ipomset of step `j` (1-based).
pub fn step_factor<X: Complex>(cx: &X, p: &Path<X::Cell>, j: usize) -> Ipomset {
    let step = p.steps()[j - 1];
    if step.is_up() {
        make_starter(&object(cx, &p.cells()[j]), step.index).expect("valid path")
    } else {
        make_terminator(&object(cx, &p.cells()[j - 1]), step.index).expect("valid path")
    }
}

/// The ipomset label: the first cell's identity glued with every step's factor.
/// Events come out named `e1, e2, …`: first the first cell's events in order,
/// then each started event in step order.
pub fn ev<X: Complex>(cx: &X, p: &Path<X::Cell>) -> Result<Ipomset, SemanticsError> {
    check_path(cx, p)?;
    let mut acc = make_identity(&object(cx, p.first()));
    for j in 1..=p.len() {
        acc = glue(&acc, &step_factor(cx, p, j)).expect("consecutive factors share an interface");
    }
    Ok(acc)
}

/// For each step, the 0-based index of the event it starts or terminates, in the
/// naming used by [`ev`].
pub fn step_events<X: Complex>(cx: &X, p: &Path<X::Cell>) -> Vec<usize> {
    let mut active: Vec<usize> = (0..cx.dim(p.first())).collect();
    let mut next = active.len();
    p.steps()
        .iter()
        .map(|s| {
            if s.is_up() {
                active.insert(s.index - 1, next);
                next += 1;
                next - 1
            } else {
                active.remove(s.index - 1)
            }
        })
        .collect()
}

fn step_label<X: Complex>(cx: &X, p: &Path<X::Cell>, j: usize) -> Label {
    let s = p.steps()[j - 1];
    let higher = if s.is_up() { &p.cells()[j] } else { &p.cells()[j - 1] };
    cx.labels(higher)[s.index - 1].clone()
}

pub fn split_trace<X: Complex>(cx: &X, p: &Path<X::Cell>) -> Result<SplitTrace, SemanticsError> {
    check_execution(cx, p)?;
    Ok(SplitTrace(
        (1..=p.len())
            .map(|j| (step_label(cx, p, j), if p.steps()[j - 1].is_up() { Sign::Plus } else { Sign::Minus }))
            .collect(),
    ))
}

/// Active-slot tracking: an up-step at `i` opens slot `i` tagged with its step
/// number, a down-step at `i` closes slot `i` and reports the tag.
pub fn st_trace<X: Complex>(cx: &X, p: &Path<X::Cell>) -> Result<StTrace, SemanticsError> {
    check_execution(cx, p)?;
    let mut active: Vec<usize> = Vec::new();
    let mut out = Vec::with_capacity(p.len());
    for (j, s) in p.steps().iter().enumerate() {
        let label = step_label(cx, p, j + 1);
        if s.is_up() {
            active.insert(s.index - 1, j + 1);
            out.push(StEvent::Start(label));
        } else {
            out.push(StEvent::Term { label, start: active.remove(s.index - 1) });
        }
    }
    Ok(StTrace(out))
}

/// Equal length, equal polarities and equal discrete factors at every step.
pub fn matching_events<X: Complex, Y: Complex>(cx: &X, p: &Path<X::Cell>, cy: &Y, q: &Path<Y::Cell>) -> bool {
    p.len() == q.len()
        && p.steps().iter().zip(q.steps()).all(|(a, b)| a == b)
        && (1..=p.len()).all(|j| {
            let (s, _) = (p.steps()[j - 1], ());
            let (hp, hq) =
                if s.is_up() { (&p.cells()[j], &q.cells()[j]) } else { (&p.cells()[j - 1], &q.cells()[j - 1]) };
            cx.labels(hp) == cy.labels(hq)
        })
}

/// Positions of every event in every cell of `p`, as event indices of `ev(p)`.
fn active_events<X: Complex>(cx: &X, p: &Path<X::Cell>) -> Vec<Vec<usize>> {
    let mut active: Vec<usize> = (0..cx.dim(p.first())).collect();
    let mut next = active.len();
    let mut out = vec![active.clone()];
    for s in p.steps() {
        if s.is_up() {
            active.insert(s.index - 1, next);
            next += 1;
        } else {
            active.remove(s.index - 1);
        }
        out.push(active.clone());
    }
    out
}

/// A total order on the events of `target` extending both interface orders,
/// ties broken by event index.
fn interface_order(target: &Ipomset) -> Result<Vec<usize>, SemanticsError> {
    let n = target.len();
    let mut succ = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for side in [target.src(), target.tgt()] {
        for (&a, &b) in side.iter().tuple_windows() {
            succ[a].push(b);
            indeg[b] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<usize>> = (0..n).filter(|&e| indeg[e] == 0).map(Reverse).collect();
    let mut rank = vec![usize::MAX; n];
    let mut r = 0;
    while let Some(Reverse(e)) = heap.pop() {
        rank[e] = r;
        r += 1;
        for &b in &succ[e] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                heap.push(Reverse(b));
            }
        }
    }
    if r < n {
        return Err(SemanticsError::Unrealizable(
            "source and target interfaces order some persistent events differently".into(),
        ));
    }
    Ok(rank)
}

/// A lifting of `p` whose label is `target` on the nose (up to event names):
/// every cell is permuted so that its events appear in one global order that
/// extends both interface orders of `target`.
pub fn realize_iso_as_lifting(
    sx: &Symmetrization<'_>,
    p: &Path<CellRef>,
    target: &Ipomset,
) -> Result<Path<SCell>, SemanticsError> {
    let x = sx.base();
    let label = ev(x, p)?;
    let f = iso(&label, target).ok_or(SemanticsError::NotIsomorphic)?;
    let rank = interface_order(target)?;
    let thetas: Vec<Permutation> = active_events(x, p)
        .iter()
        .map(|events| {
            let ranks: Vec<usize> = events.iter().map(|&e| rank[f.events[e]]).collect();
            let images = ranks.iter().map(|r| 1 + ranks.iter().filter(|s| *s < r).count()).collect();
            Permutation::from_one_line(images).expect("distinct ranks")
        })
        .collect();
    let cells: Vec<SCell> = thetas.iter().zip(p.cells()).map(|(t, &c)| SCell::new(t.clone(), c)).collect();
    let steps: Vec<Step> = p
        .steps()
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let tau = if s.is_up() { &thetas[j + 1] } else { &thetas[j] };
            Step { polarity: s.polarity, index: tau.apply(s.index) }
        })
        .collect();
    let lift = Path::new(cells, steps).expect("shape preserved");
    debug_assert!(validate_path(sx, &lift, None).is_empty());
    let lifted = ev(sx, &lift)?;
    if iso_strict(&lifted, target).is_none() {
        return Err(SemanticsError::Unrealizable("lifted label differs from the target".into()));
    }
    Ok(lift)
}

/// Reorder the steps of `p` inside each maximal same-polarity block, with the
/// reversible exchange rules, until step `j` touches event `desired[j]`.
fn reorder_blocks<X: Complex>(cx: &X, p: &Path<X::Cell>, desired: &[usize]) -> Option<Path<X::Cell>> {
    let mut events = step_events(cx, p);
    for block in p.blocks() {
        let have: BTreeSet<usize> = events[block.clone()].iter().copied().collect();
        let want: BTreeSet<usize> = desired[block.clone()].iter().copied().collect();
        if have != want {
            return None;
        }
    }
    let mut path = p.clone();
    for t in 0..desired.len() {
        let mut s = events[t..].iter().position(|&e| e == desired[t])? + t;
        while s > t {
            // steps s-1 and s (0-based) are positions s and s+1
            let (next, rule) = adjacent_replace(cx, &path, s)?;
            debug_assert!(rule.is_reversible());
            path = next;
            events.swap(s - 1, s);
            s -= 1;
        }
    }
    Some(path)
}

/// A path congruent to `p` whose steps have the same discrete factors as `q`,
/// given `ev(p) = ev(q)`. Each isomorphism of the common label fixes the event
/// order of `q`; `p` is reordered block by block to follow it.
pub fn align_congruent<X: Complex, Y: Complex>(
    cx: &X,
    p: &Path<X::Cell>,
    cy: &Y,
    q: &Path<Y::Cell>,
) -> Result<Option<Path<X::Cell>>, SemanticsError> {
    let (ep, eq) = (ev(cx, p)?, ev(cy, q)?);
    if ep != eq {
        return Err(SemanticsError::PreconditionViolated("labels differ".into()));
    }
    let q_events = step_events(cy, q);
    for f in all_isos(&ep, &eq, true) {
        let back = f.inverse();
        let desired: Vec<usize> = q_events.iter().map(|&e| back.events[e]).collect();
        if let Some(gamma) = reorder_blocks(cx, p, &desired) {
            if matching_events(cx, &gamma, cy, q) {
                return Ok(Some(gamma));
            }
        }
    }
    Ok(None)
}

/// A path congruent to `p` with the ST-trace of `q`, for executions with
/// isomorphic labels: lift `p` so that its label is `ev(q)` exactly, reorder the
/// lift to start and end events in `q`'s order, and project back.
pub fn transfer_trace(
    x: &PrecubicalSet,
    p: &Path<CellRef>,
    y: &PrecubicalSet,
    q: &Path<CellRef>,
) -> Result<Option<Path<CellRef>>, SemanticsError> {
    check_execution(x, p)?;
    check_execution(y, q)?;
    let target = ev(y, q)?;
    let want = st_trace(y, q)?;
    let sx = symmetrize(x)?;
    let lift = match realize_iso_as_lifting(&sx, p, &target) {
        Ok(l) => l,
        Err(SemanticsError::NotIsomorphic) => return Ok(None),
        Err(e) => return Err(e),
    };
    let lifted = ev(&sx, &lift)?;
    let q_events = step_events(y, q);
    for f in all_isos(&lifted, &target, true) {
        let back = f.inverse();
        let desired: Vec<usize> = q_events.iter().map(|&e| back.events[e]).collect();
        let Some(reordered) = reorder_blocks(&sx, &lift, &desired) else { continue };
        let gamma = underlying_path(&sx, &reordered).map_err(|e| SemanticsError::InvalidPath(e.to_string()))?;
        if st_trace(x, &gamma)? == want {
            return Ok(Some(gamma));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ipomset::is_interval;
    use crate::paths::{all_liftings, canonical_lifting, congruence_class, parse_path, CONGRUENCE_CAP};

    fn parse(x: &PrecubicalSet, s: &str) -> Path<CellRef> {
        parse_path(x, s).unwrap()
    }

    /// Direct construction: `a < b` iff `a` ends before `b` starts.
    fn ev_by_intervals<X: Complex>(cx: &X, p: &Path<X::Cell>) -> Ipomset {
        let n0 = cx.dim(p.first());
        let events = step_events(cx, p);
        let total = n0 + p.steps().iter().filter(|s| s.is_up()).count();
        let mut start = vec![0usize; total];
        let mut end = vec![usize::MAX; total];
        let mut labels: Vec<Label> = cx.labels(p.first()).into_owned();
        for (j, (&e, s)) in events.iter().zip(p.steps()).enumerate() {
            if s.is_up() {
                start[e] = j + 1;
                labels.push(step_label(cx, p, j + 1));
            } else {
                end[e] = j + 1;
            }
        }
        let lt: Vec<(usize, usize)> = (0..total)
            .flat_map(|a| (0..total).map(move |b| (a, b)))
            .filter(|&(a, b)| end[a] != usize::MAX && end[a] < start[b])
            .collect();
        let last = active_events(cx, p).pop().unwrap();
        let names: Vec<&str> = labels.iter().map(Label::as_str).collect();
        Ipomset::build(&names, &lt, &(0..n0).collect::<Vec<_>>(), &last)
    }

    #[test]
    fn single_cell_label_is_identity() {
        let sq = fixtures::filled_square("a", "b").complex;
        let x = sq.get("x").unwrap();
        assert_eq!(ev(&sq, &Path::single(x)).unwrap(), make_identity(sq.cell_labels(x)));
    }

    #[test]
    fn cube_path_label() {
        let x = fixtures::two_cubes().complex;
        let p = parse(&x, "a_b_c -3 a_b_1 +3 a_b_d");
        let label = ev(&x, &p).unwrap();
        let expected = Ipomset::build(&["a", "b", "c", "d"], &[(2, 3)], &[0, 1, 2], &[0, 1, 3]);
        assert_eq!(label, expected);
        assert!(is_interval(&label));
    }

    #[test]
    fn three_cycle_lifting_label_is_permuted() {
        let x = fixtures::two_cubes().complex;
        let sx = symmetrize(&x).unwrap();
        let p = parse(&x, "a_b_c -3 a_b_1 +3 a_b_d");
        let sigma = Permutation::from_one_line(vec![2, 3, 1]).unwrap();
        let beta = all_liftings(&sx, &p)
            .into_iter()
            .find(|l| l.cells()[0].theta == sigma && l.cells()[2].theta == sigma)
            .unwrap();
        let label = ev(&sx, &beta).unwrap();
        // rows (c, a, b) before and (d, a, b) after
        let expected = Ipomset::build(&["c", "a", "b", "d"], &[(0, 3)], &[0, 1, 2], &[3, 1, 2]);
        assert_eq!(label, expected);
        assert!(iso(&label, &ev(&x, &p).unwrap()).is_some());
        assert!(iso_strict(&label, &ev(&x, &p).unwrap()).is_none());
    }

    #[test]
    fn split_traces() {
        let sq = fixtures::filled_square("a", "b");
        let x = &sq.complex;
        assert_eq!(split_trace(x, &parse(x, "v00 +1 a")).unwrap().to_string(), "a+");
        let run = parse(x, "v00 +1 a +2 x -1 t -1 v11");
        assert_eq!(split_trace(x, &run).unwrap().to_string(), "a+ b+ a- b-");
        assert_eq!(split_trace(x, &parse(x, "v00")).unwrap(), SplitTrace::default());
        assert_eq!(split_trace(x, &parse(x, "a")), Err(SemanticsError::NotAnExecution));
    }

    #[test]
    fn interleavings_of_a_parallel_pair() {
        let sq = fixtures::filled_square("a", "b");
        let x = &sq.complex;
        let p = parse(x, "v00 +1 a +2 x -1 t -1 v11");
        let q = parse(x, "v00 +1 b +1 x -1 t -1 v11");
        let (tp, tq) = (st_trace(x, &p).unwrap(), st_trace(x, &q).unwrap());
        assert_eq!(tp.to_string(), "a+ b+ a-@1 b-@2");
        assert_eq!(tq.to_string(), "b+ a+ a-@2 b-@1");
        assert_ne!(tp, tq);
        assert!(iso(&ev(x, &p).unwrap(), &ev(x, &q).unwrap()).is_some());
        let single = fixtures::single_edge("a");
        let r = parse(&single.complex, "u +1 e -1 v");
        assert_eq!(st_trace(&single.complex, &r).unwrap().to_string(), "a+ a-@1");
    }

    #[test]
    fn trace_text_round_trip() {
        let t: StTrace = "a+ b+ a-@1 b-@2".parse().unwrap();
        assert_eq!(t.to_string(), "a+ b+ a-@1 b-@2");
        assert!("a+ b-@1".parse::<StTrace>().is_err());
        assert!("a+ a-@1 a-@1".parse::<StTrace>().is_err());
        assert!("a-@0".parse::<StTrace>().is_err());
    }

    #[test]
    fn matching_liftings_through_autoconcurrent_cells() {
        let x = fixtures::chains(&["a", "a", "aa"]).complex;
        let sx = symmetrize(&x).unwrap();
        let p = parse(&x, "a_a_a1 -3 a_a_1 +3 a_a_a2");
        let lifts = all_liftings(&sx, &p);
        let canon = canonical_lifting(&sx, &p);
        let twins: Vec<_> = lifts.iter().filter(|l| **l != canon && matching_events(&sx, *l, &sx, &canon)).collect();
        assert!(!twins.is_empty());
        for t in twins {
            assert_eq!(st_trace(&sx, t).ok(), st_trace(&sx, &canon).ok());
        }
        assert!(matching_events(&x, &p, &x, &p));
        assert!(!matching_events(&x, &p, &x, &p.prefix(1)));
    }

    #[test]
    fn canonical_lift_realises_own_label() {
        let sq = fixtures::filled_square("a", "b").complex;
        let sx = symmetrize(&sq).unwrap();
        let p = parse(&sq, "b +1 x -2 s");
        let own = ev(&sq, &p).unwrap();
        let lift = realize_iso_as_lifting(&sx, &p, &own).unwrap();
        assert!(all_liftings(&sx, &p).contains(&lift));
        assert_eq!(underlying_path(&sx, &lift).unwrap(), p);
        assert!(iso_strict(&ev(&sx, &lift).unwrap(), &own).is_some());
        let whole = parse(&sq, "v00 +1 a +2 x -1 t -1 v11");
        let own = ev(&sq, &whole).unwrap();
        assert_eq!(realize_iso_as_lifting(&sx, &whole, &own).unwrap(), canonical_lifting(&sx, &whole));
    }

    #[test]
    fn swapped_label_needs_the_swapped_square() {
        let sq = fixtures::filled_square("a", "b").complex;
        let sx = symmetrize(&sq).unwrap();
        let p = parse(&sq, "v00 +1 a +2 x");
        // (a ∥ b) with b in the first slot
        let target = Ipomset::build(&["b", "a"], &[], &[], &[0, 1]);
        let lift = realize_iso_as_lifting(&sx, &p, &target).unwrap();
        assert_eq!(lift.last().theta.as_slice(), &[2, 1]);
        assert!(iso_strict(&ev(&sx, &lift).unwrap(), &target).is_some());
        let seq = Ipomset::build(&["a", "b"], &[(0, 1)], &[], &[1]);
        assert_eq!(realize_iso_as_lifting(&sx, &p, &seq), Err(SemanticsError::NotIsomorphic));
    }

    #[test]
    fn row_permuted_cube_label_uses_permuted_cells() {
        let x = fixtures::two_cubes().complex;
        let sx = symmetrize(&x).unwrap();
        let p = parse(&x, "a_b_c -3 a_b_1 +3 a_b_d");
        let target = Ipomset::build(&["c", "a", "b", "d"], &[(0, 3)], &[0, 1, 2], &[3, 1, 2]);
        let lift = realize_iso_as_lifting(&sx, &p, &target).unwrap();
        assert_eq!(lift.cells()[0].theta.as_slice(), &[2, 3, 1]);
        assert_eq!(ev(&sx, &lift).unwrap(), target);
    }

    #[test]
    fn crossing_interfaces_cannot_be_realised() {
        let sq = fixtures::filled_square("a", "b").complex;
        let sx = symmetrize(&sq).unwrap();
        let x = sq.get("x").unwrap();
        let crossed = Ipomset::build(&["a", "b"], &[], &[0, 1], &[1, 0]);
        assert!(iso(&ev(&sq, &Path::single(x)).unwrap(), &crossed).is_some());
        assert!(matches!(
            realize_iso_as_lifting(&sx, &Path::single(x), &crossed),
            Err(SemanticsError::Unrealizable(_))
        ));
    }

    #[test]
    fn align_identical_paths() {
        let sq = fixtures::filled_square("a", "b").complex;
        let p = parse(&sq, "v00 +1 a +2 x -1 t");
        assert_eq!(align_congruent(&sq, &p, &sq, &p).unwrap(), Some(p.clone()));
        let other = parse(&sq, "v00 +1 a -1 v10");
        assert!(matches!(align_congruent(&sq, &p, &sq, &other), Err(SemanticsError::PreconditionViolated(_))));
    }

    #[test]
    fn align_swapped_terminations() {
        let x = fixtures::chains(&["a", "b"]).complex;
        let p = parse(&x, "0_0 +1 a_0 +2 a_b -1 1_b -1 1_1");
        let q = parse(&x, "0_0 +1 a_0 +2 a_b -2 a_1 -1 1_1");
        assert_eq!(ev(&x, &p).unwrap(), ev(&x, &q).unwrap());
        let gamma = align_congruent(&x, &p, &x, &q).unwrap().unwrap();
        assert_eq!(gamma, q);
        assert!(congruence_class(&x, &p, CONGRUENCE_CAP).unwrap().contains(&gamma));
    }

    #[test]
    fn transfer_on_the_square() {
        let sq = fixtures::filled_square("a", "b").complex;
        let ba = fixtures::filled_square("b", "a").complex;
        let p = parse(&sq, "v00 +1 a +2 x -1 t -1 v11");
        assert_eq!(transfer_trace(&sq, &p, &sq, &p).unwrap(), Some(p.clone()));
        // in `ba` the edge named `a` carries label b
        let q = parse(&ba, "v00 +1 a +2 x -1 t -1 v11");
        assert_eq!(st_trace(&ba, &q).unwrap().to_string(), "b+ a+ b-@1 a-@2");
        let gamma = transfer_trace(&sq, &p, &ba, &q).unwrap().unwrap();
        assert_eq!(gamma, parse(&sq, "v00 +1 b +1 x -2 s -1 v11"));
        assert!(congruence_class(&sq, &p, CONGRUENCE_CAP).unwrap().contains(&gamma));
        let seq = parse(&sq, "v00 +1 a -1 v10 +1 t -1 v11");
        assert_eq!(transfer_trace(&sq, &p, &sq, &seq).unwrap(), None);
    }

    #[test]
    fn labels_match_the_interval_construction() {
        for h in [fixtures::two_cubes(), fixtures::two_squares(), fixtures::chains(&["ab", "a"])] {
            let x = &h.complex;
            for start in x.cell_refs() {
                for len in 0..=4 {
                    for p in crate::paths::paths_from(x, start, len) {
                        let label = ev(x, &p).unwrap();
                        assert_eq!(label, ev_by_intervals(x, &p));
                        assert!(is_interval(&label));
                        for q in congruence_class(x, &p, CONGRUENCE_CAP).unwrap() {
                            assert!(iso(&ev(x, &q).unwrap(), &label).is_some());
                        }
                    }
                }
            }
        }
    }
}
