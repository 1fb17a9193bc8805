//! Morphisms of the base categories: conclist/concset maps, permutations,
//! coface words and their canonical presentations.
//!
//! Positions and permutation entries are 1-based everywhere. A permutation is
//! stored in one-line notation and `tau.compose(&sigma)` applies `sigma` first.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaseError {
    #[error("index {index} out of range 1..={arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("object mismatch: expected {expected}, found {found}")]
    ObjectMismatch { expected: CanonicalObject, found: CanonicalObject },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(String);

impl Label {
    pub fn new(name: impl Into<String>) -> Self {
        Label(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_string())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A list of labels; position `j` is the carrier element `j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalObject(Vec<Label>);

impl CanonicalObject {
    pub fn new(labels: Vec<Label>) -> Self {
        CanonicalObject(labels)
    }

    /// One label per character, e.g. `"abdc"`.
    pub fn from_chars(word: &str) -> Self {
        CanonicalObject(word.chars().map(|c| Label(c.to_string())).collect())
    }

    pub fn from_strs<S: AsRef<str>>(labels: &[S]) -> Self {
        CanonicalObject(labels.iter().map(|s| Label::new(s.as_ref())).collect())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn into_labels(self) -> Vec<Label> {
        self.0
    }

    /// Label at 1-based position `j`.
    pub fn label(&self, j: usize) -> &Label {
        &self.0[j - 1]
    }

    /// The object `λ ∘ f` for an injection `f` given by its images.
    pub fn pull_back(&self, f: &[usize]) -> CanonicalObject {
        CanonicalObject(f.iter().map(|&j| self.label(j).clone()).collect())
    }

    /// The object `λ ∘ θ⁻¹`, i.e. the codomain of `θ` viewed as a morphism out of `self`.
    pub fn permuted(&self, theta: &Permutation) -> CanonicalObject {
        self.pull_back(theta.inverse().as_slice())
    }
}

impl fmt::Display for CanonicalObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0.len(), self.0.iter().join(""))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Status {
    NotStarted,
    Executing,
    Terminated,
}

impl Status {
    pub fn symbol(self) -> char {
        match self {
            Status::NotStarted => '0',
            Status::Executing => '*',
            Status::Terminated => '1',
        }
    }

    pub fn from_symbol(c: char) -> Option<Status> {
        match c {
            '0' => Some(Status::NotStarted),
            '*' => Some(Status::Executing),
            '1' => Some(Status::Terminated),
            _ => None,
        }
    }
}

/// Superscript `k` of a coface map `d^k_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarity {
    Zero,
    One,
}

impl Polarity {
    pub fn from_bit(k: u8) -> Option<Polarity> {
        match k {
            0 => Some(Polarity::Zero),
            1 => Some(Polarity::One),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Polarity::Zero => 0,
            Polarity::One => 1,
        }
    }

    pub fn status(self) -> Status {
        match self {
            Polarity::Zero => Status::NotStarted,
            Polarity::One => Status::Terminated,
        }
    }

    pub fn both() -> [Polarity; 2] {
        [Polarity::Zero, Polarity::One]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl TryFrom<Vec<usize>> for Permutation {
    type Error = BaseError;

    fn try_from(v: Vec<usize>) -> Result<Self, BaseError> {
        Permutation::from_one_line(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.0
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn from_one_line(images: Vec<usize>) -> Result<Self, BaseError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n || seen[x] {
                return Err(BaseError::NotAPermutation(images));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    /// All permutations of `{1..n}` in lexicographic one-line order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (1..=n).permutations(n).map(Permutation)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, j: usize) -> usize {
        self.0[j - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(j, &x)| x == j + 1)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (j, &x) in self.0.iter().enumerate() {
            inv[x - 1] = j + 1;
        }
        Permutation(inv)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Permutation) -> Result<Permutation, BaseError> {
        if self.arity() != first.arity() {
            return Err(BaseError::ArityMismatch { expected: self.arity(), found: first.arity() });
        }
        Ok(Permutation(first.0.iter().map(|&j| self.apply(j)).collect()))
    }

    /// The induced face permutation `d_i θ`: drop position `θ⁻¹(i)` and close the gap at `i`.
    pub fn induced_face(&self, i: usize) -> Result<Permutation, BaseError> {
        let n = self.arity();
        if i == 0 || i > n {
            return Err(BaseError::IndexOutOfRange { index: i, arity: n });
        }
        Ok(Permutation(self.0.iter().filter(|&&x| x != i).map(|&x| if x > i { x - 1 } else { x }).collect()))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.iter().join(","))
    }
}

/// Images of `1..n-1` under `ι_i : {1..n-1} → {1..n}`.
pub fn insertion_map(i: usize, n: usize) -> Result<Vec<usize>, BaseError> {
    if i == 0 || i > n {
        return Err(BaseError::IndexOutOfRange { index: i, arity: n });
    }
    Ok((1..n).map(|j| insert_at(i, j)).collect())
}

/// `ι_i(j)`.
pub fn insert_at(i: usize, j: usize) -> usize {
    if j < i {
        j
    } else {
        j + 1
    }
}

/// Inverse of `ι_i` on its image.
pub fn remove_at(i: usize, j: usize) -> usize {
    debug_assert_ne!(i, j);
    if j < i {
        j
    } else {
        j - 1
    }
}

pub fn induced_face_permutation(theta: &Permutation, i: usize) -> Result<Permutation, BaseError> {
    theta.induced_face(i)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapMode {
    Conclist,
    Concset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapViolation {
    LengthMismatch { f_len: usize, source_arity: usize, eps_len: usize, target_arity: usize },
    OutOfRange { position: usize, image: usize },
    NotInjective { image: usize },
    LabelMismatch { position: usize, image: usize },
    StatusMismatch { position: usize },
    NotIncreasing { position: usize },
}

impl fmt::Display for MapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapViolation::LengthMismatch { f_len, source_arity, eps_len, target_arity } => write!(
                f,
                "f has {f_len} entries for source arity {source_arity}; eps has {eps_len} for target arity {target_arity}"
            ),
            MapViolation::OutOfRange { position, image } => {
                write!(f, "f({position}) = {image} is out of range")
            }
            MapViolation::NotInjective { image } => write!(f, "f is not injective: {image} is hit twice"),
            MapViolation::LabelMismatch { position, image } => {
                write!(f, "f({position}) = {image} does not preserve the label")
            }
            MapViolation::StatusMismatch { position } => {
                write!(f, "eps({position}) must be * exactly on the image of f")
            }
            MapViolation::NotIncreasing { position } => {
                write!(f, "f is not increasing at position {position}")
            }
        }
    }
}

/// A morphism `(f, ε)` between canonical objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BaseMap {
    pub source: CanonicalObject,
    pub target: CanonicalObject,
    pub f: Vec<usize>,
    pub eps: Vec<Status>,
}

impl BaseMap {
    pub fn new(source: CanonicalObject, target: CanonicalObject, f: Vec<usize>, eps: Vec<Status>) -> Self {
        BaseMap { source, target, f, eps }
    }

    pub fn identity(object: &CanonicalObject) -> Self {
        let n = object.arity();
        BaseMap::new(object.clone(), object.clone(), (1..=n).collect(), vec![Status::Executing; n])
    }

    /// `F(d^k_i)` into `target`.
    pub fn coface(target: &CanonicalObject, i: usize, k: Polarity) -> Result<Self, BaseError> {
        let n = target.arity();
        let f = insertion_map(i, n)?;
        let mut eps = vec![Status::Executing; n];
        eps[i - 1] = k.status();
        Ok(BaseMap::new(target.pull_back(&f), target.clone(), f, eps))
    }

    /// `F(τ)` out of `source`.
    pub fn permutation(source: &CanonicalObject, tau: &Permutation) -> Result<Self, BaseError> {
        if tau.arity() != source.arity() {
            return Err(BaseError::ArityMismatch { expected: source.arity(), found: tau.arity() });
        }
        Ok(BaseMap::new(
            source.clone(),
            source.permuted(tau),
            tau.as_slice().to_vec(),
            vec![Status::Executing; tau.arity()],
        ))
    }

    pub fn is_valid(&self, mode: MapMode) -> bool {
        validate_base_map(self, mode).is_empty()
    }

    /// All concset maps between two objects, by brute force over injections and statuses.
    pub fn enumerate(source: &CanonicalObject, target: &CanonicalObject) -> Vec<BaseMap> {
        let (m, n) = (source.arity(), target.arity());
        if m > n {
            return Vec::new();
        }
        let mut out = Vec::new();
        for f in (1..=n).permutations(m) {
            if (1..=m).any(|j| source.label(j) != target.label(f[j - 1])) {
                continue;
            }
            let outside: Vec<usize> = (1..=n).filter(|u| !f.contains(u)).collect();
            for bits in 0..(1u32 << outside.len()) {
                let mut eps = vec![Status::Executing; n];
                for (b, &u) in outside.iter().enumerate() {
                    eps[u - 1] = if bits >> b & 1 == 1 { Status::Terminated } else { Status::NotStarted };
                }
                out.push(BaseMap::new(source.clone(), target.clone(), f.clone(), eps));
            }
        }
        out
    }
}

impl fmt::Display for BaseMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eps: String = self.eps.iter().map(|s| s.symbol()).collect();
        write!(f, "f=[{}]; eps=\"{}\"", self.f.iter().join(","), eps)
    }
}

pub fn validate_base_map(m: &BaseMap, mode: MapMode) -> Vec<MapViolation> {
    let (src_n, tgt_n) = (m.source.arity(), m.target.arity());
    if m.f.len() != src_n || m.eps.len() != tgt_n {
        return vec![MapViolation::LengthMismatch {
            f_len: m.f.len(),
            source_arity: src_n,
            eps_len: m.eps.len(),
            target_arity: tgt_n,
        }];
    }
    let mut out = Vec::new();
    let mut hit = vec![false; tgt_n + 1];
    for (j, &u) in m.f.iter().enumerate() {
        let position = j + 1;
        if u == 0 || u > tgt_n {
            out.push(MapViolation::OutOfRange { position, image: u });
            continue;
        }
        if hit[u] {
            out.push(MapViolation::NotInjective { image: u });
        }
        hit[u] = true;
        if m.source.label(position) != m.target.label(u) {
            out.push(MapViolation::LabelMismatch { position, image: u });
        }
        if mode == MapMode::Conclist && j > 0 && m.f[j - 1] >= u {
            out.push(MapViolation::NotIncreasing { position });
        }
    }
    for u in (1..=tgt_n).filter(|&u| hit[u] != (m.eps[u - 1] == Status::Executing)) {
        out.push(MapViolation::StatusMismatch { position: u });
    }
    out
}

/// `g ∘ f`.
pub fn compose_base_maps(g: &BaseMap, f: &BaseMap) -> Result<BaseMap, BaseError> {
    if f.target != g.source {
        return Err(BaseError::ObjectMismatch { expected: g.source.clone(), found: f.target.clone() });
    }
    let mut eta = g.eps.clone();
    for (t, &u) in g.f.iter().enumerate() {
        eta[u - 1] = f.eps[t];
    }
    let gf = f.f.iter().map(|&t| g.f[t - 1]).collect();
    Ok(BaseMap::new(f.source.clone(), g.target.clone(), gf, eta))
}

/// `d^{k_r}_{i_r} ∘ … ∘ d^{k_1}_{i_1} ∘ τ` with `i_1 < … < i_r`.
///
/// `cofaces` is listed innermost first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalMorphism {
    pub target: CanonicalObject,
    pub cofaces: Vec<(usize, Polarity)>,
    pub tau: Permutation,
}

impl CanonicalMorphism {
    pub fn new(target: CanonicalObject, cofaces: Vec<(usize, Polarity)>, tau: Permutation) -> Result<Self, BaseError> {
        let n = target.arity();
        if tau.arity() + cofaces.len() != n {
            return Err(BaseError::ArityMismatch { expected: n, found: tau.arity() + cofaces.len() });
        }
        for w in cofaces.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(BaseError::InvalidMap(format!("coface indices must increase: {} then {}", w[0].0, w[1].0)));
            }
        }
        if let Some(&(i, _)) = cofaces.iter().find(|(i, _)| *i == 0 || *i > n) {
            return Err(BaseError::IndexOutOfRange { index: i, arity: n });
        }
        Ok(CanonicalMorphism { target, cofaces, tau })
    }

    pub fn identity(object: &CanonicalObject) -> Self {
        CanonicalMorphism { target: object.clone(), cofaces: Vec::new(), tau: Permutation::identity(object.arity()) }
    }

    pub fn source_arity(&self) -> usize {
        self.tau.arity()
    }

    /// The underlying injection `ι_{i_r} ∘ … ∘ ι_{i_1} ∘ τ`.
    pub fn injection(&self) -> Vec<usize> {
        let mut f: Vec<usize> = self.tau.as_slice().to_vec();
        for &(i, _) in &self.cofaces {
            for x in f.iter_mut() {
                *x = insert_at(i, *x);
            }
        }
        f
    }

    pub fn source(&self) -> CanonicalObject {
        self.target.pull_back(&self.injection())
    }

    /// All canonical morphisms with the given source arity into `target`.
    pub fn enumerate(source_arity: usize, target: &CanonicalObject) -> Vec<CanonicalMorphism> {
        let n = target.arity();
        if source_arity > n {
            return Vec::new();
        }
        let r = n - source_arity;
        let mut out = Vec::new();
        for positions in (1..=n).combinations(r) {
            for bits in 0..(1u32 << r) {
                let cofaces: Vec<(usize, Polarity)> = positions
                    .iter()
                    .enumerate()
                    .map(|(s, &i)| (i, if bits >> s & 1 == 1 { Polarity::One } else { Polarity::Zero }))
                    .collect();
                for tau in Permutation::all(source_arity) {
                    out.push(CanonicalMorphism { target: target.clone(), cofaces: cofaces.clone(), tau });
                }
            }
        }
        out
    }

    pub fn parse(text: &str, target: &CanonicalObject) -> Result<Self, BaseError> {
        let mut tau = None;
        let mut cofaces = None;
        for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) =
                part.split_once('=').ok_or_else(|| BaseError::Parse(format!("expected key=value, found `{part}`")))?;
            match key.trim() {
                "tau" => tau = Some(Permutation::from_one_line(parse_list(value)?)?),
                "d" => cofaces = Some(parse_coface_list(value)?),
                other => return Err(BaseError::Parse(format!("unknown key `{other}`"))),
            }
        }
        let cofaces = cofaces.unwrap_or_default();
        let tau = tau.unwrap_or_else(|| Permutation::identity(target.arity().saturating_sub(cofaces.len())));
        CanonicalMorphism::new(target.clone(), cofaces, tau)
    }
}

impl fmt::Display for CanonicalMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.cofaces.iter().map(|(i, k)| format!("({},{})", i, k.bit())).join(",");
        write!(f, "tau={}; d=[{}]", self.tau, d)
    }
}

impl BaseMap {
    /// Parse `f=[1,2,4]; eps="**1*0"`; the source object is read off the target through `f`.
    pub fn parse(text: &str, target: &CanonicalObject) -> Result<Self, BaseError> {
        let mut f = None;
        let mut eps = None;
        for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) =
                part.split_once('=').ok_or_else(|| BaseError::Parse(format!("expected key=value, found `{part}`")))?;
            match key.trim() {
                "f" => f = Some(parse_list(value)?),
                "eps" => {
                    let body = value.trim().trim_matches('"');
                    let statuses: Option<Vec<Status>> = body.chars().map(Status::from_symbol).collect();
                    eps = Some(statuses.ok_or_else(|| BaseError::Parse(format!("bad status string `{body}`")))?);
                }
                other => return Err(BaseError::Parse(format!("unknown key `{other}`"))),
            }
        }
        let f = f.ok_or_else(|| BaseError::Parse("missing f".into()))?;
        let eps = eps.ok_or_else(|| BaseError::Parse("missing eps".into()))?;
        if let Some(&u) = f.iter().find(|&&u| u == 0 || u > target.arity()) {
            return Err(BaseError::IndexOutOfRange { index: u, arity: target.arity() });
        }
        Ok(BaseMap::new(target.pull_back(&f), target.clone(), f, eps))
    }
}

fn parse_list(text: &str) -> Result<Vec<usize>, BaseError> {
    let body = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| BaseError::Parse(format!("expected [..], found `{}`", text.trim())))?;
    body.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| BaseError::Parse(format!("bad number `{s}`"))))
        .collect()
}

fn parse_coface_list(text: &str) -> Result<Vec<(usize, Polarity)>, BaseError> {
    let body = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| BaseError::Parse(format!("expected [..], found `{}`", text.trim())))?;
    let mut out = Vec::new();
    for chunk in body.split(')').map(|s| s.trim().trim_start_matches(',').trim()) {
        if chunk.is_empty() {
            continue;
        }
        let pair =
            chunk.strip_prefix('(').ok_or_else(|| BaseError::Parse(format!("expected (i,k), found `{chunk}`")))?;
        let (i, k) =
            pair.split_once(',').ok_or_else(|| BaseError::Parse(format!("expected (i,k), found `{chunk}`")))?;
        let i: usize = i.trim().parse().map_err(|_| BaseError::Parse(format!("bad index `{i}`")))?;
        let k = k
            .trim()
            .parse::<u8>()
            .ok()
            .and_then(Polarity::from_bit)
            .ok_or_else(|| BaseError::Parse(format!("bad polarity `{k}`")))?;
        out.push((i, k));
    }
    Ok(out)
}

/// `F` on a canonical presentation, as the composite of its generators.
pub fn eval_f(m: &CanonicalMorphism) -> Result<BaseMap, BaseError> {
    // Objects from the target inwards: before applying d_i, the object is λ∘ι_i.
    let mut object = m.target.clone();
    let mut acc = BaseMap::identity(&object);
    for &(i, k) in m.cofaces.iter().rev() {
        let d = BaseMap::coface(&object, i, k)?;
        object = d.source.clone();
        acc = compose_base_maps(&acc, &d)?;
    }
    if m.tau.arity() != object.arity() {
        return Err(BaseError::ArityMismatch { expected: object.arity(), found: m.tau.arity() });
    }
    let tau_source = object.pull_back(m.tau.as_slice());
    let tau = BaseMap::permutation(&tau_source, &m.tau)?;
    compose_base_maps(&acc, &tau)
}

pub fn invert_f(m: &BaseMap) -> Result<CanonicalMorphism, BaseError> {
    let violations = validate_base_map(m, MapMode::Concset);
    if let Some(v) = violations.first() {
        return Err(BaseError::InvalidMap(v.to_string()));
    }
    let cofaces: Vec<(usize, Polarity)> = m
        .eps
        .iter()
        .enumerate()
        .filter_map(|(u, s)| match s {
            Status::NotStarted => Some((u + 1, Polarity::Zero)),
            Status::Terminated => Some((u + 1, Polarity::One)),
            Status::Executing => None,
        })
        .collect();
    let image: BTreeSet<usize> = m.f.iter().copied().collect();
    let rank = |u: usize| image.range(..=u).count();
    let tau = Permutation::from_one_line(m.f.iter().map(|&u| rank(u)).collect())?;
    CanonicalMorphism::new(m.target.clone(), cofaces, tau)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Generator {
    Coface(usize, Polarity),
    Perm(Permutation),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Coface(i, k) => write!(f, "d{}_{}", k.bit(), i),
            Generator::Perm(p) => write!(f, "{p}"),
        }
    }
}

/// A composable word `g_1 ∘ g_2 ∘ … ∘ g_m` ending in `target`; `g_1` is outermost.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    pub target: CanonicalObject,
    pub gens: Vec<Generator>,
}

impl Word {
    pub fn new(target: CanonicalObject, gens: Vec<Generator>) -> Self {
        Word { target, gens }
    }

    /// Each generator as a base map, outermost first.
    pub fn factor_maps(&self) -> Result<Vec<BaseMap>, BaseError> {
        let mut object = self.target.clone();
        let mut out = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            let map = match g {
                Generator::Coface(i, k) => BaseMap::coface(&object, *i, *k)?,
                Generator::Perm(theta) => {
                    if theta.arity() != object.arity() {
                        return Err(BaseError::ArityMismatch { expected: object.arity(), found: theta.arity() });
                    }
                    BaseMap::permutation(&object.pull_back(theta.as_slice()), theta)?
                }
            };
            object = map.source.clone();
            out.push(map);
        }
        Ok(out)
    }

    /// The composite of `F` over the word, computed map by map.
    pub fn fold_maps(&self) -> Result<BaseMap, BaseError> {
        let mut acc = BaseMap::identity(&self.target);
        for map in self.factor_maps()? {
            acc = compose_base_maps(&acc, &map)?;
        }
        Ok(acc)
    }
}

/// Rewrite a word into canonical form, pushing each coface through the trailing
/// permutation and inserting it into the sorted block.
pub fn normalize(word: &Word) -> Result<CanonicalMorphism, BaseError> {
    let mut cofaces: Vec<(usize, Polarity)> = Vec::new();
    let mut sigma = Permutation::identity(word.target.arity());
    for g in &word.gens {
        match g {
            Generator::Perm(theta) => sigma = sigma.compose(theta)?,
            Generator::Coface(i, k) => {
                let a = sigma.arity();
                if *i == 0 || *i > a {
                    return Err(BaseError::IndexOutOfRange { index: *i, arity: a });
                }
                let mut j = sigma.apply(*i);
                sigma = sigma.induced_face(j)?;
                let mut t = 0;
                while t < cofaces.len() && cofaces[t].0 <= j {
                    j += 1;
                    t += 1;
                }
                cofaces.insert(t, (j, *k));
            }
        }
    }
    CanonicalMorphism::new(word.target.clone(), cofaces, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj(s: &str) -> CanonicalObject {
        CanonicalObject::from_chars(s)
    }

    fn eps(s: &str) -> Vec<Status> {
        s.chars().map(|c| Status::from_symbol(c).unwrap()).collect()
    }

    #[test]
    fn identity_composes_to_identity() {
        let id = BaseMap::identity(&obj("ab"));
        let c = compose_base_maps(&id, &id).unwrap();
        assert_eq!(c, id);
        assert_eq!(c.eps, eps("**"));
    }

    #[test]
    fn mismatched_composition_is_rejected() {
        let f = BaseMap::identity(&obj("ab"));
        let g = BaseMap::identity(&obj("ba"));
        assert!(matches!(compose_base_maps(&g, &f), Err(BaseError::ObjectMismatch { .. })));
    }

    #[test]
    fn swap_injection_is_concset_only() {
        let m = BaseMap::new(obj("aa"), obj("aab"), vec![2, 1], eps("**0"));
        assert!(validate_base_map(&m, MapMode::Concset).is_empty());
        assert_eq!(validate_base_map(&m, MapMode::Conclist), vec![MapViolation::NotIncreasing { position: 2 }]);
    }

    #[test]
    fn repeated_image_is_not_injective() {
        let m = BaseMap::new(obj("aa"), obj("aa"), vec![1, 1], eps("**"));
        let v = validate_base_map(&m, MapMode::Concset);
        assert!(v.contains(&MapViolation::NotInjective { image: 1 }));
    }

    #[test]
    fn insertion_maps() {
        assert_eq!(insertion_map(2, 3).unwrap(), vec![1, 3]);
        assert_eq!(insertion_map(1, 1).unwrap(), Vec::<usize>::new());
        assert!(insertion_map(0, 2).is_err());
        assert!(insertion_map(3, 2).is_err());
        for n in 1..=5 {
            for i in 1..=n {
                let image: BTreeSet<usize> = insertion_map(i, n).unwrap().into_iter().collect();
                let expected: BTreeSet<usize> = (1..=n).filter(|&j| j != i).collect();
                assert_eq!(image, expected);
            }
        }
    }

    #[test]
    fn induced_face_of_identity_is_identity() {
        for n in 1..=5 {
            for i in 1..=n {
                assert!(Permutation::identity(n).induced_face(i).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn face_square_commutes() {
        // ι_i ∘ d_iθ = θ ∘ ι_{θ⁻¹(i)}, checked pointwise.
        for n in 1..=5 {
            for theta in Permutation::all(n) {
                for i in 1..=n {
                    let d = theta.induced_face(i).unwrap();
                    let p = theta.inverse().apply(i);
                    for j in 1..n {
                        assert_eq!(insert_at(i, d.apply(j)), theta.apply(insert_at(p, j)));
                    }
                }
            }
        }
    }

    #[test]
    fn three_cycle_face_at_one() {
        let sigma = Permutation::from_one_line(vec![2, 3, 1]).unwrap();
        assert!(sigma.induced_face(1).unwrap().is_identity());
        assert_eq!(sigma.induced_face(2).unwrap().as_slice(), &[2, 1]);
    }

    #[test]
    fn coface_image() {
        let d =
            eval_f(&CanonicalMorphism::new(obj("ab"), vec![(2, Polarity::Zero)], Permutation::identity(1)).unwrap())
                .unwrap();
        assert_eq!(d.source, obj("a"));
        assert_eq!(d.f, vec![1]);
        assert_eq!(d.eps, eps("*0"));
    }

    #[test]
    fn invert_swap_map() {
        let m = BaseMap::new(obj("aa"), obj("aab"), vec![2, 1], eps("**0"));
        let c = invert_f(&m).unwrap();
        assert_eq!(c.cofaces, vec![(3, Polarity::Zero)]);
        assert_eq!(c.tau.as_slice(), &[2, 1]);
        assert_eq!(eval_f(&c).unwrap(), m);
    }

    #[test]
    fn invert_rejects_invalid() {
        let m = BaseMap::new(obj("aa"), obj("aa"), vec![1, 1], eps("**"));
        assert!(matches!(invert_f(&m), Err(BaseError::InvalidMap(_))));
    }

    #[test]
    fn normalize_examples() {
        let w = Word::new(obj("aaa"), vec![Generator::Coface(2, Polarity::Zero)]);
        let c = normalize(&w).unwrap();
        assert_eq!(c.cofaces, vec![(2, Polarity::Zero)]);
        assert!(c.tau.is_identity());

        let w = Word::new(obj("aaaa"), vec![Generator::Coface(3, Polarity::One), Generator::Coface(1, Polarity::Zero)]);
        let c = normalize(&w).unwrap();
        assert_eq!(c.cofaces, vec![(1, Polarity::Zero), (3, Polarity::One)]);

        let w =
            Word::new(obj("aaaa"), vec![Generator::Coface(1, Polarity::Zero), Generator::Coface(3, Polarity::Zero)]);
        let c = normalize(&w).unwrap();
        assert_eq!(c.cofaces, vec![(1, Polarity::Zero), (4, Polarity::Zero)]);
        assert_eq!(eval_f(&c).unwrap(), w.fold_maps().unwrap());
    }

    #[test]
    fn normalize_rejects_bad_arity() {
        let w = Word::new(obj("ab"), vec![Generator::Perm(Permutation::identity(3))]);
        assert!(matches!(normalize(&w), Err(BaseError::ArityMismatch { .. })));
        let w = Word::new(obj("ab"), vec![Generator::Coface(3, Polarity::Zero)]);
        assert!(matches!(normalize(&w), Err(BaseError::IndexOutOfRange { .. })));
    }

    #[test]
    fn conclist_isomorphisms_are_unique() {
        for word in ["aab", "abab", "aaa"] {
            let o = obj(word);
            let isos: Vec<_> =
                BaseMap::enumerate(&o, &o).into_iter().filter(|m| m.is_valid(MapMode::Conclist)).collect();
            assert_eq!(isos, vec![BaseMap::identity(&o)]);
        }
    }

    #[test]
    fn text_round_trip() {
        let target = obj("abcde");
        let c = CanonicalMorphism::parse("tau=[2,1,3]; d=[(3,1),(5,0)]", &target).unwrap();
        assert_eq!(c.to_string(), "tau=[2,1,3]; d=[(3,1),(5,0)]");
        let m = BaseMap::parse("f=[1,2,4]; eps=\"**1*0\"", &target).unwrap();
        assert_eq!(m.source, obj("abd"));
        assert_eq!(m.to_string(), "f=[1,2,4]; eps=\"**1*0\"");
        assert!(CanonicalMorphism::parse("tau=[1,1]; d=[]", &obj("ab")).is_err());
        assert!(BaseMap::parse("f=[9]; eps=\"*\"", &obj("a")).is_err());
    }
}
