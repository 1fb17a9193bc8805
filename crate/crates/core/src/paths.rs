//! Paths of up- and down-steps, adjacency rewriting, congruence and liftings.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::base_cats::{insert_at, Permutation, Polarity};
use crate::precubical::{CellRef, Complex, PrecubicalSet, SCell, Symmetrization};

/// Default cap for [`congruence_class`].
pub const CONGRUENCE_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("a path needs one more cell than steps ({cells} cells, {steps} steps)")]
    Shape { cells: usize, steps: usize },
    #[error("paths do not meet: {0}")]
    EndpointMismatch(String),
    #[error("congruence class exceeds {cap} paths")]
    ClassTooLarge { cap: usize },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("parse error at token {position}: {message}")]
    Parse { position: usize, message: String },
}

/// `d^k_i`; polarity `Zero` is an up-step (a start), `One` a down-step (a termination).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub polarity: Polarity,
    pub index: usize,
}

impl Step {
    pub fn up(index: usize) -> Self {
        Step { polarity: Polarity::Zero, index }
    }

    pub fn down(index: usize) -> Self {
        Step { polarity: Polarity::One, index }
    }

    pub fn is_up(self) -> bool {
        self.polarity == Polarity::Zero
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.is_up() { '+' } else { '-' }, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path<C> {
    cells: Vec<C>,
    steps: Vec<Step>,
}

impl<C: Clone + Eq> Path<C> {
    pub fn single(cell: C) -> Self {
        Path { cells: vec![cell], steps: Vec::new() }
    }

    pub fn new(cells: Vec<C>, steps: Vec<Step>) -> Result<Self, PathError> {
        if cells.len() != steps.len() + 1 {
            return Err(PathError::Shape { cells: cells.len(), steps: steps.len() });
        }
        Ok(Path { cells, steps })
    }

    pub fn cells(&self) -> &[C] {
        &self.cells
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn first(&self) -> &C {
        &self.cells[0]
    }

    pub fn last(&self) -> &C {
        self.cells.last().expect("nonempty")
    }

    pub fn extended(&self, step: Step, cell: C) -> Self {
        let mut p = self.clone();
        p.steps.push(step);
        p.cells.push(cell);
        p
    }

    /// The prefix with `len` steps.
    pub fn prefix(&self, len: usize) -> Self {
        Path { cells: self.cells[..=len].to_vec(), steps: self.steps[..len].to_vec() }
    }

    /// 1-based positions where the polarity flips between consecutive steps,
    /// i.e. the boundaries of maximal same-polarity blocks.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for j in 1..=self.steps.len() {
            if j == self.steps.len() || self.steps[j].polarity != self.steps[start].polarity {
                out.push(start..j);
                start = j;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathViolation {
    Shape,
    IndexOutOfRange { position: usize, step: Step },
    FaceMismatch { position: usize, step: Step },
    NotInitial,
}

impl fmt::Display for PathViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathViolation::Shape => f.write_str("cells and steps do not alternate"),
            PathViolation::IndexOutOfRange { position, step } => {
                write!(f, "step {position} ({step}) has no such face")
            }
            PathViolation::FaceMismatch { position, step } => {
                write!(f, "step {position} ({step}) does not connect its cells")
            }
            PathViolation::NotInitial => f.write_str("path does not start at the initial cell"),
        }
    }
}

fn step_holds<X: Complex>(cx: &X, from: &X::Cell, step: Step, to: &X::Cell) -> Option<bool> {
    if step.is_up() {
        cx.face(to, step.index, Polarity::Zero).map(|f| f == *from)
    } else {
        cx.face(from, step.index, Polarity::One).map(|f| f == *to)
    }
}

pub fn validate_path<X: Complex>(cx: &X, p: &Path<X::Cell>, initial: Option<&X::Cell>) -> Vec<PathViolation> {
    if p.cells.len() != p.steps.len() + 1 {
        return vec![PathViolation::Shape];
    }
    let mut out = Vec::new();
    if let Some(init) = initial {
        if p.first() != init {
            out.push(PathViolation::NotInitial);
        }
    }
    for (j, &step) in p.steps.iter().enumerate() {
        let position = j + 1;
        match step_holds(cx, &p.cells[j], step, &p.cells[j + 1]) {
            None => out.push(PathViolation::IndexOutOfRange { position, step }),
            Some(false) => out.push(PathViolation::FaceMismatch { position, step }),
            Some(true) => {}
        }
    }
    out
}

pub fn is_valid_path<X: Complex>(cx: &X, p: &Path<X::Cell>) -> bool {
    validate_path(cx, p, None).is_empty()
}

pub fn concat<C: Clone + Eq + fmt::Debug>(p: &Path<C>, q: &Path<C>) -> Result<Path<C>, PathError> {
    if p.last() != q.first() {
        return Err(PathError::EndpointMismatch(format!("{:?} vs {:?}", p.last(), q.first())));
    }
    let mut out = p.clone();
    out.steps.extend_from_slice(&q.steps);
    out.cells.extend_from_slice(&q.cells[1..]);
    Ok(out)
}

pub fn prefixes<C: Clone + Eq>(p: &Path<C>) -> Vec<Path<C>> {
    (0..=p.len()).map(|n| p.prefix(n)).collect()
}

/// Which of the four exchange rules produced a replacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// Two starts swap.
    StartStart,
    /// Two terminations swap.
    TermTerm,
    /// A start followed by a later-indexed termination.
    StartTermLow,
    /// A start followed by an earlier-indexed termination.
    StartTermHigh,
}

impl Rule {
    pub fn number(self) -> u8 {
        match self {
            Rule::StartStart => 1,
            Rule::TermTerm => 2,
            Rule::StartTermLow => 3,
            Rule::StartTermHigh => 4,
        }
    }

    pub fn is_reversible(self) -> bool {
        matches!(self, Rule::StartStart | Rule::TermTerm)
    }
}

/// Replacement steps for the segment `(a, b)` together with the new middle cell,
/// computed from the outer cells. Starts/terminations swap in both directions;
/// a start followed by a termination moves the termination first.
pub fn adjacent_replace<X: Complex>(cx: &X, p: &Path<X::Cell>, l: usize) -> Option<(Path<X::Cell>, Rule)> {
    if l == 0 || l >= p.len() {
        return None;
    }
    let (a, b) = (p.steps[l - 1], p.steps[l]);
    let before = &p.cells[l - 1];
    let after = &p.cells[l + 1];
    let (first, second, middle, rule) = match (a.is_up(), b.is_up()) {
        (true, true) => {
            let (c, d) = if a.index < b.index { (b.index - 1, a.index) } else { (b.index, a.index + 1) };
            (Step::up(c), Step::up(d), cx.face(after, d, Polarity::Zero)?, Rule::StartStart)
        }
        (false, false) => {
            let (c, d) = if b.index < a.index { (b.index, a.index - 1) } else { (b.index + 1, a.index) };
            (Step::down(c), Step::down(d), cx.face(before, c, Polarity::One)?, Rule::TermTerm)
        }
        (true, false) => {
            let (c, d, rule) = match a.index.cmp(&b.index) {
                std::cmp::Ordering::Less => (b.index - 1, a.index, Rule::StartTermLow),
                std::cmp::Ordering::Greater => (b.index, a.index - 1, Rule::StartTermHigh),
                std::cmp::Ordering::Equal => return None,
            };
            (Step::down(c), Step::up(d), cx.face(before, c, Polarity::One)?, rule)
        }
        (false, true) => return None,
    };
    let mut q = p.clone();
    q.steps[l - 1] = first;
    q.steps[l] = second;
    q.cells[l] = middle;
    debug_assert!(step_holds(cx, before, first, &q.cells[l]) == Some(true));
    debug_assert!(step_holds(cx, &q.cells[l], second, after) == Some(true));
    Some((q, rule))
}

/// Every path adjacent to `p` at position `l`, in either direction of the rules.
/// The reverse of rules 3 and 4 needs the cofaces of the outer cells.
pub fn adjacent_paths(x: &PrecubicalSet, p: &Path<CellRef>, l: usize) -> Vec<(Path<CellRef>, Rule)> {
    if l == 0 || l >= p.len() {
        return Vec::new();
    }
    let (a, b) = (p.steps[l - 1], p.steps[l]);
    if a.is_up() || !b.is_up() {
        return adjacent_replace(x, p, l).into_iter().collect();
    }
    let before = p.cells[l - 1];
    let after = p.cells[l + 1];
    let mut out = Vec::new();
    for &(z, i, k) in x.cofaces(before) {
        if k != Polarity::Zero {
            continue;
        }
        for j in (1..=x.cell_dim(z)).filter(|&j| j != i) {
            if x.cell(z).face(j, Polarity::One) != after {
                continue;
            }
            let mut r = p.clone();
            r.steps[l - 1] = Step::up(i);
            r.steps[l] = Step::down(j);
            r.cells[l] = z;
            if let Some((back, rule)) = adjacent_replace(x, &r, l) {
                if back == *p {
                    out.push((r, rule));
                }
            }
        }
    }
    out.sort();
    out
}

/// Closure of `{p}` under the reversible rules at every position.
pub fn congruence_class<X: Complex>(
    cx: &X,
    p: &Path<X::Cell>,
    cap: usize,
) -> Result<BTreeSet<Path<X::Cell>>, PathError> {
    let mut seen = BTreeSet::from([p.clone()]);
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(q) = queue.pop_front() {
        for l in 1..q.len() {
            if q.steps[l - 1].polarity != q.steps[l].polarity {
                continue;
            }
            if let Some((r, _)) = adjacent_replace(cx, &q, l) {
                if seen.insert(r.clone()) {
                    if seen.len() > cap {
                        return Err(PathError::ClassTooLarge { cap });
                    }
                    queue.push_back(r);
                }
            }
        }
    }
    Ok(seen)
}

/// The lift with every permutation the identity.
pub fn canonical_lifting(sx: &Symmetrization<'_>, p: &Path<CellRef>) -> Path<SCell> {
    Path { cells: p.cells.iter().map(|&c| sx.canonical(c)).collect(), steps: p.steps.clone() }
}

/// `τ_j` after an up-step at `i` lifted to position `p`: `τ_j(i) = p`, `τ_j ∘ ι_i = ι_p ∘ τ_{j-1}`.
fn raise(prev: &Permutation, i: usize, p: usize) -> Permutation {
    let n = prev.arity() + 1;
    let mut images = vec![0; n];
    images[i - 1] = p;
    for q in 1..n {
        images[insert_at(i, q) - 1] = insert_at(p, prev.apply(q));
    }
    Permutation::from_one_line(images).expect("bijective by construction")
}

/// All paths in `SX` whose underlying path is `p`. Every starting permutation is
/// free; each up-step may place the started event at any position; down-steps are forced.
pub fn all_liftings(sx: &Symmetrization<'_>, p: &Path<CellRef>) -> Vec<Path<SCell>> {
    let x = sx.base();
    let mut out = Vec::new();
    for tau0 in Permutation::all(x.cell_dim(p.cells[0])) {
        let start = Path::single(SCell::new(tau0, p.cells[0]));
        extend_liftings(sx, p, start, &mut out);
    }
    out
}

fn extend_liftings(sx: &Symmetrization<'_>, p: &Path<CellRef>, partial: Path<SCell>, out: &mut Vec<Path<SCell>>) {
    let j = partial.len();
    if j == p.len() {
        debug_assert!(is_valid_path(sx, &partial));
        out.push(partial);
        return;
    }
    let step = p.steps[j];
    let next = p.cells[j + 1];
    let tau = &partial.last().theta;
    if step.is_up() {
        for pos in 1..=tau.arity() + 1 {
            let lifted = SCell::new(raise(tau, step.index, pos), next);
            extend_liftings(sx, p, partial.extended(Step::up(pos), lifted), out);
        }
    } else {
        let pos = tau.apply(step.index);
        let lifted = SCell::new(tau.induced_face(pos).expect("in range"), next);
        extend_liftings(sx, p, partial.extended(Step::down(pos), lifted), out);
    }
}

/// Strip permutations, mapping each lifted index back through the relevant `τ`.
pub fn underlying_path(sx: &Symmetrization<'_>, q: &Path<SCell>) -> Result<Path<CellRef>, PathError> {
    if let Some(v) = validate_path(sx, q, None).first() {
        return Err(PathError::InvalidPath(v.to_string()));
    }
    let steps = q
        .steps
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let tau = if s.is_up() { &q.cells[j + 1].theta } else { &q.cells[j].theta };
            Step { polarity: s.polarity, index: tau.inverse().apply(s.index) }
        })
        .collect();
    Ok(Path { cells: q.cells.iter().map(|c| c.base).collect(), steps })
}

/// One-step extensions `(step, cell)` out of a cell: starts first, then terminations.
pub fn successors(x: &PrecubicalSet, cell: CellRef) -> Vec<(Step, CellRef)> {
    let mut out: Vec<(Step, CellRef)> =
        x.cofaces(cell).iter().filter(|(_, _, k)| *k == Polarity::Zero).map(|&(z, i, _)| (Step::up(i), z)).collect();
    out.sort();
    out.extend((1..=x.cell_dim(cell)).map(|i| (Step::down(i), x.cell(cell).face(i, Polarity::One))));
    out
}

/// `cell (step cell)*`, e.g. `a +2 x -1 t`.
pub fn parse_path(x: &PrecubicalSet, text: &str) -> Result<Path<CellRef>, PathError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(PathError::Parse { position: 0, message: "empty path".into() });
    }
    if tokens.len().is_multiple_of(2) {
        return Err(PathError::Parse { position: tokens.len(), message: "path must end with a cell".into() });
    }
    let cell = |pos: usize| {
        x.find(tokens[pos])
            .ok_or_else(|| PathError::Parse { position: pos + 1, message: format!("unknown cell `{}`", tokens[pos]) })
    };
    let mut cells = vec![cell(0)?];
    let mut steps = Vec::new();
    for pos in (1..tokens.len()).step_by(2) {
        let tok = tokens[pos];
        let bad = || PathError::Parse { position: pos + 1, message: format!("expected +i or -i, found `{tok}`") };
        let (sign, digits) = tok.split_at(tok.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
        let index: usize = digits.parse().map_err(|_| bad())?;
        steps.push(match sign {
            "+" => Step::up(index),
            "-" => Step::down(index),
            _ => return Err(bad()),
        });
        cells.push(cell(pos + 1)?);
    }
    Ok(Path { cells, steps })
}

pub fn format_path<X: Complex>(cx: &X, p: &Path<X::Cell>) -> String {
    let mut out = cx.cell_name(p.first());
    for (s, c) in p.steps.iter().zip(&p.cells[1..]) {
        out.push_str(&format!(" {} {}", s, cx.cell_name(c)));
    }
    out
}

impl<C: fmt::Debug> fmt::Display for Path<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.cells[0])?;
        for (s, c) in self.steps.iter().zip(&self.cells[1..]) {
            write!(f, " {s} {c:?}")?;
        }
        Ok(())
    }
}

/// Every path of exactly `len` steps starting at `start`.
pub fn paths_from(x: &PrecubicalSet, start: CellRef, len: usize) -> Vec<Path<CellRef>> {
    let mut layer = vec![Path::single(start)];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|p| successors(x, *p.last()).into_iter().map(move |(s, c)| p.extended(s, c)))
            .collect();
    }
    layer
}

/// Positions `1..len` with a same-polarity pair of steps.
pub fn swappable_positions<C: Clone + Eq>(p: &Path<C>) -> Vec<usize> {
    p.steps.iter().tuple_windows().positions(|(a, b)| a.polarity == b.polarity).map(|j| j + 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::precubical::symmetrize;
    use proptest::prelude::*;

    fn walk(x: &PrecubicalSet, start: usize, choices: &[usize]) -> Path<CellRef> {
        let mut p = Path::single(CellRef(start % x.len()));
        for &c in choices {
            let next = successors(x, *p.last());
            if next.is_empty() {
                break;
            }
            let (s, cell) = next[c % next.len()];
            p = p.extended(s, cell);
        }
        p
    }

    fn fixture_complexes() -> Vec<PrecubicalSet> {
        vec![
            fixtures::filled_square("a", "b").complex,
            fixtures::two_squares().complex,
            fixtures::two_cubes().complex,
            fixtures::chains(&["ab", "a"]).complex,
        ]
    }

    #[test]
    fn square_path_validates() {
        let sq = fixtures::filled_square("a", "b");
        let p = parse_path(&sq.complex, "a +2 x -1 t").unwrap();
        assert!(validate_path(&sq.complex, &p, None).is_empty());
        assert_eq!(validate_path(&sq.complex, &p, Some(&sq.initial)), vec![PathViolation::NotInitial]);
        let reversed = parse_path(&sq.complex, "t +2 x -1 a").unwrap();
        assert_eq!(validate_path(&sq.complex, &reversed, None).len(), 2);
        let out_of_range = parse_path(&sq.complex, "a +3 x").unwrap();
        assert!(matches!(
            validate_path(&sq.complex, &out_of_range, None)[0],
            PathViolation::IndexOutOfRange { position: 1, .. }
        ));
    }

    #[test]
    fn entering_along_b_edge() {
        let sq = fixtures::filled_square("a", "b").complex;
        let p = parse_path(&sq, "b +1 x -2 s").unwrap();
        assert!(is_valid_path(&sq, &p));
        let swapped = parse_path(&sq, "b +2 x -1 s").unwrap();
        assert!(!is_valid_path(&sq, &swapped));
    }

    #[test]
    fn cube_path_validates() {
        let x = fixtures::two_cubes().complex;
        let p = parse_path(&x, "a_b_c -3 a_b_1 +3 a_b_d").unwrap();
        assert!(is_valid_path(&x, &p));
    }

    #[test]
    fn parse_errors() {
        let sq = fixtures::filled_square("a", "b").complex;
        assert!(matches!(parse_path(&sq, ""), Err(PathError::Parse { .. })));
        assert!(matches!(parse_path(&sq, "a +2"), Err(PathError::Parse { .. })));
        assert!(matches!(parse_path(&sq, "a *2 x"), Err(PathError::Parse { position: 2, .. })));
        assert!(matches!(parse_path(&sq, "a +2 zz"), Err(PathError::Parse { position: 3, .. })));
        let p = parse_path(&sq, "a +2 x -1 t").unwrap();
        assert_eq!(format_path(&sq, &p), "a +2 x -1 t");
    }

    #[test]
    fn concat_and_prefixes() {
        let x = fixtures::two_squares().complex;
        let p = parse_path(&x, "a +1 p").unwrap();
        let q = parse_path(&x, "p -1 b").unwrap();
        let pq = concat(&p, &q).unwrap();
        assert_eq!(pq, parse_path(&x, "a +1 p -1 b").unwrap());
        assert!(is_valid_path(&x, &pq));
        assert_eq!(concat(&pq, &Path::single(*pq.last())).unwrap(), pq);
        assert!(matches!(concat(&q, &q), Err(PathError::EndpointMismatch(_))));
        assert_eq!(prefixes(&Path::single(CellRef(0))).len(), 1);
        let pre = prefixes(&parse_path(&x, "a +1 p -1 b").unwrap());
        assert_eq!(pre.len(), 3);
        assert!(pre.iter().all(|p| is_valid_path(&x, p)));
    }

    #[test]
    fn rule_one_on_the_square() {
        let sq = fixtures::filled_square("a", "b");
        let p = parse_path(&sq.complex, "v00 +1 a +2 x").unwrap();
        let (q, rule) = adjacent_replace(&sq.complex, &p, 1).unwrap();
        assert_eq!(rule, Rule::StartStart);
        assert_eq!(q, parse_path(&sq.complex, "v00 +1 b +1 x").unwrap());
        let class = congruence_class(&sq.complex, &p, CONGRUENCE_CAP).unwrap();
        assert_eq!(class.len(), 2);
    }

    #[test]
    fn stuck_pattern() {
        let sq = fixtures::filled_square("a", "b");
        let p = parse_path(&sq.complex, "v00 +1 a -1 v10").unwrap();
        assert!(adjacent_replace(&sq.complex, &p, 1).is_none());
        assert_eq!(congruence_class(&sq.complex, &p, CONGRUENCE_CAP).unwrap().len(), 1);
    }

    #[test]
    fn start_then_other_termination() {
        let sq = fixtures::filled_square("a", "b");
        let p = parse_path(&sq.complex, "a +2 x -1 t").unwrap();
        let (q, rule) = adjacent_replace(&sq.complex, &p, 1).unwrap();
        assert_eq!(rule, Rule::StartTermHigh);
        assert_eq!(q, parse_path(&sq.complex, "a -1 v10 +1 t").unwrap());
        let back = adjacent_paths(&sq.complex, &q, 1);
        assert_eq!(back, vec![(p, Rule::StartTermHigh)]);
    }

    #[test]
    fn one_skeleton_class_is_trivial() {
        let hollow = fixtures::hollow_square("a", "b").complex;
        let p = parse_path(&hollow, "v00 +1 a -1 v10 +1 t -1 v11").unwrap();
        assert_eq!(congruence_class(&hollow, &p, CONGRUENCE_CAP).unwrap().len(), 1);
    }

    #[test]
    fn class_cap_is_enforced() {
        let cube = fixtures::cube(["a", "b", "c"]).complex;
        let p = parse_path(&cube, "0_0_0 +1 a_0_0 +2 a_b_0 +3 a_b_c").unwrap();
        assert_eq!(congruence_class(&cube, &p, CONGRUENCE_CAP).unwrap().len(), 6);
        assert_eq!(congruence_class(&cube, &p, 3), Err(PathError::ClassTooLarge { cap: 3 }));
    }

    #[test]
    fn square_liftings() {
        let sq = fixtures::filled_square("a", "b").complex;
        let sx = symmetrize(&sq).unwrap();
        let p = parse_path(&sq, "b +1 x -2 s").unwrap();
        let lifts = all_liftings(&sx, &p);
        assert_eq!(lifts.len(), 2);
        assert!(lifts.contains(&canonical_lifting(&sx, &p)));
        for l in &lifts {
            assert_eq!(underlying_path(&sx, l).unwrap(), p);
        }
    }

    #[test]
    fn low_dimensional_paths_lift_uniquely() {
        let hollow = fixtures::hollow_square("a", "b").complex;
        let sx = symmetrize(&hollow).unwrap();
        let p = parse_path(&hollow, "v00 +1 a -1 v10 +1 t").unwrap();
        assert_eq!(all_liftings(&sx, &p), vec![canonical_lifting(&sx, &p)]);
    }

    #[test]
    fn three_cycle_lifting_of_the_cube_path() {
        let x = fixtures::two_cubes().complex;
        let sx = symmetrize(&x).unwrap();
        let p = parse_path(&x, "a_b_c -3 a_b_1 +3 a_b_d").unwrap();
        let sigma = Permutation::from_one_line(vec![2, 3, 1]).unwrap();
        let lifts = all_liftings(&sx, &p);
        let beta = lifts.iter().find(|l| l.cells()[0].theta == sigma && l.cells()[2].theta == sigma).unwrap();
        assert_eq!(beta.steps(), &[Step::down(1), Step::up(1)]);
        assert!(beta.cells()[1].theta.is_identity());
        assert_eq!(underlying_path(&sx, beta).unwrap(), p);
    }

    #[test]
    fn underlying_rejects_invalid() {
        let sq = fixtures::filled_square("a", "b").complex;
        let sx = symmetrize(&sq).unwrap();
        let p = parse_path(&sq, "b +1 x -2 s").unwrap();
        let mut bad = canonical_lifting(&sx, &p);
        bad.steps[0] = Step::up(2);
        assert!(matches!(underlying_path(&sx, &bad), Err(PathError::InvalidPath(_))));
    }

    /// Brute force over all permutation tuples and lifted indices.
    fn liftings_by_search(sx: &Symmetrization<'_>, p: &Path<CellRef>) -> BTreeSet<Path<SCell>> {
        let x = sx.base();
        let choices: Vec<Vec<Permutation>> =
            p.cells().iter().map(|&c| Permutation::all(x.cell_dim(c)).collect()).collect();
        let indices: Vec<Vec<usize>> = p
            .steps()
            .iter()
            .zip(p.cells().iter().tuple_windows())
            .map(|(s, (&a, &b))| (1..=x.cell_dim(if s.is_up() { b } else { a })).collect())
            .collect();
        let mut out = BTreeSet::new();
        for taus in choices.into_iter().multi_cartesian_product_or_unit() {
            for idx in indices.clone().into_iter().multi_cartesian_product_or_unit() {
                let cells: Vec<SCell> = taus.iter().zip(p.cells()).map(|(t, &c)| SCell::new(t.clone(), c)).collect();
                let steps: Vec<Step> =
                    p.steps().iter().zip(&idx).map(|(s, &i)| Step { polarity: s.polarity, index: i }).collect();
                let q = Path::new(cells, steps).unwrap();
                if is_valid_path(sx, &q) && underlying_path(sx, &q).unwrap() == *p {
                    out.insert(q);
                }
            }
        }
        out
    }

    trait CartesianOrUnit<T> {
        fn multi_cartesian_product_or_unit(self) -> Vec<Vec<T>>;
    }

    impl<T: Clone> CartesianOrUnit<T> for std::vec::IntoIter<Vec<T>> {
        fn multi_cartesian_product_or_unit(self) -> Vec<Vec<T>> {
            let v: Vec<Vec<T>> = self.collect();
            if v.is_empty() {
                vec![Vec::new()]
            } else {
                v.into_iter().multi_cartesian_product().collect()
            }
        }
    }

    #[test]
    fn liftings_match_brute_force() {
        for x in fixture_complexes() {
            let sx = symmetrize(&x).unwrap();
            for start in x.cell_refs() {
                for len in 0..=3 {
                    for p in paths_from(&x, start, len) {
                        let fast: BTreeSet<_> = all_liftings(&sx, &p).into_iter().collect();
                        assert_eq!(fast, liftings_by_search(&sx, &p), "{}", format_path(&x, &p));
                    }
                }
            }
        }
    }

    #[test]
    fn cube_path_lifting_count() {
        let x = fixtures::two_cubes().complex;
        let sx = symmetrize(&x).unwrap();
        let p = parse_path(&x, "a_b_c -3 a_b_1 +3 a_b_d").unwrap();
        assert_eq!(all_liftings(&sx, &p).len(), liftings_by_search(&sx, &p).len());
        assert_eq!(all_liftings(&sx, &p).len(), 18);
    }

    #[test]
    fn congruence_with_mixed_polarities_can_break_adjacency() {
        // Swapping the two starts changes which event is terminated right after
        // the last start, turning a movable segment into a stuck one.
        let sq = fixtures::filled_square("a", "b").complex;
        let p = parse_path(&sq, "v00 +1 a +2 x -1 t").unwrap();
        let q = parse_path(&sq, "v00 +1 b +1 x -1 t").unwrap();
        assert!(congruence_class(&sq, &p, CONGRUENCE_CAP).unwrap().contains(&q));
        assert!(adjacent_replace(&sq, &p, 2).is_some());
        assert!(adjacent_replace(&sq, &q, 2).is_none());
        assert!(adjacent_paths(&sq, &q, 2).is_empty());
    }

    proptest! {
        #[test]
        fn reversible_rules_are_involutions(fx in 0usize..4, start in 0usize..64, choices in prop::collection::vec(0usize..16, 0..6)) {
            let x = &fixture_complexes()[fx];
            let p = walk(x, start, &choices);
            prop_assert!(is_valid_path(x, &p));
            for l in 1..p.len() {
                if let Some((q, rule)) = adjacent_replace(x, &p, l) {
                    prop_assert!(is_valid_path(x, &q));
                    prop_assert_eq!(q.first(), p.first());
                    prop_assert_eq!(q.last(), p.last());
                    prop_assert_eq!(q.len(), p.len());
                    if rule.is_reversible() {
                        let (back, again) = adjacent_replace(x, &q, l).unwrap();
                        prop_assert_eq!(back, p.clone());
                        prop_assert_eq!(again, rule);
                    } else {
                        let reverse = adjacent_paths(x, &q, l);
                        prop_assert!(reverse.iter().any(|(r, _)| *r == p));
                    }
                }
            }
        }

        #[test]
        fn same_polarity_adjacency_is_a_congruence_invariant(fx in 0usize..4, start in 0usize..64, choices in prop::collection::vec(0usize..16, 0..5)) {
            let x = &fixture_complexes()[fx];
            let p = walk(x, start, &choices);
            let class = congruence_class(x, &p, CONGRUENCE_CAP).unwrap();
            for q in &class {
                prop_assert!(class.iter().all(|r| congruence_class(x, r, CONGRUENCE_CAP).unwrap() == class));
                prop_assert_eq!(q.first(), p.first());
                prop_assert_eq!(q.last(), p.last());
                for l in swappable_positions(&p) {
                    prop_assert!(adjacent_replace(x, &p, l).is_some());
                    prop_assert!(adjacent_replace(x, q, l).is_some());
                }
            }
        }

        #[test]
        fn liftings_project_back(fx in 0usize..4, start in 0usize..64, choices in prop::collection::vec(0usize..16, 0..6)) {
            let x = &fixture_complexes()[fx];
            let sx = symmetrize(x).unwrap();
            let p = walk(x, start, &choices);
            let lifts = all_liftings(&sx, &p);
            prop_assert!(lifts.contains(&canonical_lifting(&sx, &p)));
            for l in &lifts {
                prop_assert!(is_valid_path(&sx, l));
                prop_assert_eq!(&underlying_path(&sx, l).unwrap(), &p);
            }
        }
    }
}
