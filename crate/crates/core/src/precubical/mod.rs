//! Finite precubical sets, HDAs, and the symmetriser.

mod product;
mod symmetric;

use std::borrow::Cow;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::base_cats::{insert_at, CanonicalObject, Label, Polarity};

pub use product::product_of_chains;
pub use symmetric::{
    symmetrize, validate_symmetric, SCell, SymViolation, SymmetricComplex, Symmetrization, MAX_MATERIALIZED_DIM,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("duplicate cell id `{0}`")]
    DuplicateId(String),
    #[error("cell `{cell}` refers to unknown face `{face}`")]
    UnknownCell { cell: String, face: String },
    #[error("cell `{cell}` of dimension {dim} lists {d0} d0-faces and {d1} d1-faces")]
    FaceTable { cell: String, dim: usize, d0: usize, d1: usize },
    #[error("unknown cell `{0}`")]
    NotFound(String),
    #[error("initial cell `{cell}` has dimension {dim}, expected 0")]
    InitialNotVertex { cell: String, dim: usize },
    #[error("complex is invalid: {0}")]
    InvalidComplex(String),
    #[error("cell `{cell}` is kept but its face `{face}` is not")]
    NotFaceClosed { cell: String, face: String },
    #[error("dimension {dim} exceeds the materialisation cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("malformed input: {0}")]
    Format(String),
}

/// Index of a cell inside its complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellRef(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub labels: CanonicalObject,
    pub d0: Vec<CellRef>,
    pub d1: Vec<CellRef>,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.labels.arity()
    }

    pub fn face(&self, i: usize, k: Polarity) -> CellRef {
        match k {
            Polarity::Zero => self.d0[i - 1],
            Polarity::One => self.d1[i - 1],
        }
    }
}

/// On-disk record of a cell: faces are listed by id for `i = 1..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSpec {
    pub id: String,
    pub labels: Vec<Label>,
    #[serde(default)]
    pub d0: Vec<String>,
    #[serde(default)]
    pub d1: Vec<String>,
}

impl CellSpec {
    pub fn vertex(id: &str) -> Self {
        CellSpec { id: id.into(), labels: Vec::new(), d0: Vec::new(), d1: Vec::new() }
    }

    pub fn new(id: &str, labels: &[&str], d0: &[&str], d1: &[&str]) -> Self {
        CellSpec {
            id: id.into(),
            labels: labels.iter().map(|&l| Label::from(l)).collect(),
            d0: d0.iter().map(|s| s.to_string()).collect(),
            d1: d1.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecubicalSet {
    alphabet: BTreeSet<Label>,
    cells: Vec<Cell>,
    index: HashMap<String, CellRef>,
    cofaces: Vec<Vec<(CellRef, usize, Polarity)>>,
}

impl PrecubicalSet {
    pub fn from_specs(alphabet: impl IntoIterator<Item = Label>, specs: Vec<CellSpec>) -> Result<Self, ComplexError> {
        let mut index = HashMap::with_capacity(specs.len());
        for (n, spec) in specs.iter().enumerate() {
            if index.insert(spec.id.clone(), CellRef(n)).is_some() {
                return Err(ComplexError::DuplicateId(spec.id.clone()));
            }
        }
        let resolve = |cell: &str, face: &str| {
            index.get(face).copied().ok_or_else(|| ComplexError::UnknownCell { cell: cell.into(), face: face.into() })
        };
        let mut cells = Vec::with_capacity(specs.len());
        for spec in &specs {
            let dim = spec.labels.len();
            if spec.d0.len() != dim || spec.d1.len() != dim {
                return Err(ComplexError::FaceTable {
                    cell: spec.id.clone(),
                    dim,
                    d0: spec.d0.len(),
                    d1: spec.d1.len(),
                });
            }
            let d0 = spec.d0.iter().map(|f| resolve(&spec.id, f)).collect::<Result<_, _>>()?;
            let d1 = spec.d1.iter().map(|f| resolve(&spec.id, f)).collect::<Result<_, _>>()?;
            cells.push(Cell { id: spec.id.clone(), labels: CanonicalObject::new(spec.labels.clone()), d0, d1 });
        }
        Ok(Self::assemble(alphabet.into_iter().collect(), cells, index))
    }

    fn assemble(alphabet: BTreeSet<Label>, cells: Vec<Cell>, index: HashMap<String, CellRef>) -> Self {
        let mut cofaces = vec![Vec::new(); cells.len()];
        for (n, cell) in cells.iter().enumerate() {
            for i in 1..=cell.dim() {
                for k in Polarity::both() {
                    cofaces[cell.face(i, k).0].push((CellRef(n), i, k));
                }
            }
        }
        PrecubicalSet { alphabet, cells, index, cofaces }
    }

    pub fn to_specs(&self) -> Vec<CellSpec> {
        self.cells
            .iter()
            .map(|c| CellSpec {
                id: c.id.clone(),
                labels: c.labels.labels().to_vec(),
                d0: c.d0.iter().map(|&r| self.id(r).to_string()).collect(),
                d1: c.d1.iter().map(|&r| self.id(r).to_string()).collect(),
            })
            .collect()
    }

    pub fn alphabet(&self) -> &BTreeSet<Label> {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_refs(&self) -> impl Iterator<Item = CellRef> + '_ {
        (0..self.cells.len()).map(CellRef)
    }

    pub fn cell(&self, r: CellRef) -> &Cell {
        &self.cells[r.0]
    }

    pub fn find(&self, id: &str) -> Option<CellRef> {
        self.index.get(id).copied()
    }

    pub fn get(&self, id: &str) -> Result<CellRef, ComplexError> {
        self.find(id).ok_or_else(|| ComplexError::NotFound(id.into()))
    }

    pub fn id(&self, r: CellRef) -> &str {
        &self.cells[r.0].id
    }

    pub fn cell_labels(&self, r: CellRef) -> &CanonicalObject {
        &self.cells[r.0].labels
    }

    pub fn cell_dim(&self, r: CellRef) -> usize {
        self.cells[r.0].dim()
    }

    /// `δ^k_i` of a cell; `None` when `i` is out of range.
    pub fn try_face(&self, r: CellRef, i: usize, k: Polarity) -> Option<CellRef> {
        let cell = &self.cells[r.0];
        (1..=cell.dim()).contains(&i).then(|| cell.face(i, k))
    }

    /// Triples `(z, i, k)` with `δ^k_i z = r`.
    pub fn cofaces(&self, r: CellRef) -> &[(CellRef, usize, Polarity)] {
        &self.cofaces[r.0]
    }

    pub fn max_dim(&self) -> usize {
        self.cells.iter().map(Cell::dim).max().unwrap_or(0)
    }

    /// Number of cells in each dimension `0..=max_dim`.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_dim() + 1];
        for c in &self.cells {
            counts[c.dim()] += 1;
        }
        if self.cells.is_empty() {
            counts.clear();
        }
        counts
    }

    /// Sub-complex of kept cells; the kept set must be closed under faces.
    pub fn restrict(&self, keep: impl Fn(CellRef) -> bool) -> Result<Self, ComplexError> {
        let kept: Vec<CellRef> = self.cell_refs().filter(|&r| keep(r)).collect();
        let mut renumber = HashMap::with_capacity(kept.len());
        for (n, &r) in kept.iter().enumerate() {
            renumber.insert(r, CellRef(n));
        }
        let mut cells = Vec::with_capacity(kept.len());
        for &r in &kept {
            let c = self.cell(r);
            let map = |faces: &[CellRef]| -> Result<Vec<CellRef>, ComplexError> {
                faces
                    .iter()
                    .map(|f| {
                        renumber.get(f).copied().ok_or_else(|| ComplexError::NotFaceClosed {
                            cell: c.id.clone(),
                            face: self.id(*f).to_string(),
                        })
                    })
                    .collect()
            };
            cells.push(Cell { id: c.id.clone(), labels: c.labels.clone(), d0: map(&c.d0)?, d1: map(&c.d1)? });
        }
        let index = cells.iter().enumerate().map(|(n, c)| (c.id.clone(), CellRef(n))).collect();
        Ok(Self::assemble(self.alphabet.clone(), cells, index))
    }

    pub fn skeleton(&self, max_dim: usize) -> Self {
        self.restrict(|r| self.cell_dim(r) <= max_dim).expect("skeleta are face-closed")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownLabel { cell: String, label: Label },
    FaceDimension { cell: String, i: usize, k: u8, face: String },
    FaceLabels { cell: String, i: usize, k: u8, face: String },
    CubicalIdentity { cell: String, i: usize, j: usize, k: u8, l: u8 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownLabel { cell, label } => {
                write!(f, "cell `{cell}` uses label `{label}` outside the alphabet")
            }
            Violation::FaceDimension { cell, i, k, face } => {
                write!(f, "cell `{cell}`: face d{k}_{i} = `{face}` has the wrong dimension")
            }
            Violation::FaceLabels { cell, i, k, face } => {
                write!(f, "cell `{cell}`: face d{k}_{i} = `{face}` has incompatible labels")
            }
            Violation::CubicalIdentity { cell, i, j, k, l } => {
                write!(f, "cell `{cell}`: d{k}_{i} d{l}_{j} differs from d{l}_{} d{k}_{i}", j - 1)
            }
        }
    }
}

pub fn validate_precubical(x: &PrecubicalSet) -> Vec<Violation> {
    let mut out = Vec::new();
    for r in x.cell_refs() {
        let cell = x.cell(r);
        for label in cell.labels.labels() {
            if !x.alphabet.contains(label) {
                out.push(Violation::UnknownLabel { cell: cell.id.clone(), label: label.clone() });
            }
        }
        let n = cell.dim();
        let mut faces_ok = true;
        for i in 1..=n {
            let expected = cell.labels.pull_back(&(1..n).map(|j| insert_at(i, j)).collect::<Vec<_>>());
            for k in Polarity::both() {
                let face = cell.face(i, k);
                let face_id = x.id(face).to_string();
                if x.cell_dim(face) + 1 != n {
                    out.push(Violation::FaceDimension { cell: cell.id.clone(), i, k: k.bit(), face: face_id });
                    faces_ok = false;
                } else if *x.cell_labels(face) != expected {
                    out.push(Violation::FaceLabels { cell: cell.id.clone(), i, k: k.bit(), face: face_id });
                }
            }
        }
        if !faces_ok {
            continue;
        }
        for j in 2..=n {
            for i in 1..j {
                for k in Polarity::both() {
                    for l in Polarity::both() {
                        let lhs = x.try_face(cell.face(j, l), i, k);
                        let rhs = x.try_face(cell.face(i, k), j - 1, l);
                        if lhs.is_none() || lhs != rhs {
                            out.push(Violation::CubicalIdentity {
                                cell: cell.id.clone(),
                                i,
                                j,
                                k: k.bit(),
                                l: l.bit(),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// A precubical set with an initial 0-cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hda {
    pub complex: PrecubicalSet,
    pub initial: CellRef,
}

impl Hda {
    pub fn new(complex: PrecubicalSet, initial: &str) -> Result<Self, ComplexError> {
        let r = complex.get(initial)?;
        let dim = complex.cell_dim(r);
        if dim != 0 {
            return Err(ComplexError::InitialNotVertex { cell: initial.into(), dim });
        }
        Ok(Hda { complex, initial: r })
    }

    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        let file: HdaFile = serde_json::from_str(text).map_err(|e| ComplexError::Format(e.to_string()))?;
        file.into_hda()
    }

    pub fn to_json(&self) -> String {
        let file = HdaFile::from_hda(self);
        serde_json::to_string_pretty(&file).expect("hda files serialise")
    }

    /// `s*(SX)` with the copy of the initial vertex as initial cell.
    pub fn symmetrized(&self, max_dim: usize) -> Result<Hda, ComplexError> {
        let sx = symmetrize(&self.complex)?;
        let complex = sx.forget_symmetry(max_dim)?;
        let initial = sx.scell_id(&SCell::identity_over(self.initial));
        Hda::new(complex, &initial)
    }
}

/// The JSON layout of an HDA file. `final` is accepted and preserved but has no meaning.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HdaFile {
    pub alphabet: Vec<Label>,
    pub initial: String,
    pub cells: Vec<CellSpec>,
    #[serde(default, rename = "final", skip_serializing_if = "Option::is_none")]
    pub final_cells: Option<Vec<String>>,
}

impl HdaFile {
    pub fn into_hda(self) -> Result<Hda, ComplexError> {
        let complex = PrecubicalSet::from_specs(self.alphabet, self.cells)?;
        for id in self.final_cells.iter().flatten() {
            complex.get(id)?;
        }
        Hda::new(complex, &self.initial)
    }

    pub fn from_hda(h: &Hda) -> Self {
        HdaFile {
            alphabet: h.complex.alphabet().iter().cloned().collect(),
            initial: h.complex.id(h.initial).to_string(),
            cells: h.complex.to_specs(),
            final_cells: None,
        }
    }
}

/// Read access shared by ordered and symmetrised complexes.
pub trait Complex {
    type Cell: Clone + Eq + Ord + Hash + fmt::Debug;

    fn labels(&self, cell: &Self::Cell) -> Cow<'_, [Label]>;

    fn dim(&self, cell: &Self::Cell) -> usize {
        self.labels(cell).len()
    }

    /// `δ^k_i`, or `None` when `i` is out of range.
    fn face(&self, cell: &Self::Cell, i: usize, k: Polarity) -> Option<Self::Cell>;

    fn cell_name(&self, cell: &Self::Cell) -> String;
}

impl Complex for PrecubicalSet {
    type Cell = CellRef;

    fn labels(&self, cell: &CellRef) -> Cow<'_, [Label]> {
        Cow::Borrowed(self.cell_labels(*cell).labels())
    }

    fn dim(&self, cell: &CellRef) -> usize {
        self.cell_dim(*cell)
    }

    fn face(&self, cell: &CellRef, i: usize, k: Polarity) -> Option<CellRef> {
        self.try_face(*cell, i, k)
    }

    fn cell_name(&self, cell: &CellRef) -> String {
        self.id(*cell).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn two_square_complex_is_valid() {
        let x = fixtures::two_squares().complex;
        assert!(validate_precubical(&x).is_empty());
        assert_eq!(x.counts_by_dim(), vec![6, 7, 2]);
    }

    #[test]
    fn perturbed_face_breaks_an_identity() {
        let mut specs = fixtures::two_squares().complex.to_specs();
        let x = specs.iter_mut().find(|s| s.id == "x").unwrap();
        x.d0[1] = "p".into();
        let alphabet = [Label::from("a")];
        let bad = PrecubicalSet::from_specs(alphabet, specs).unwrap();
        let violations = validate_precubical(&bad);
        assert!(violations.iter().any(|v| matches!(v, Violation::CubicalIdentity { cell, .. } if cell == "x")));
    }

    #[test]
    fn single_vertex_is_valid() {
        let x = PrecubicalSet::from_specs([], vec![CellSpec::vertex("v")]).unwrap();
        assert!(validate_precubical(&x).is_empty());
    }

    #[test]
    fn label_outside_alphabet() {
        let specs = vec![CellSpec::vertex("u"), CellSpec::vertex("v"), CellSpec::new("e", &["z"], &["u"], &["v"])];
        let x = PrecubicalSet::from_specs([Label::from("a")], specs).unwrap();
        assert_eq!(validate_precubical(&x).len(), 1);
    }

    #[test]
    fn referential_errors_name_the_cell() {
        let specs = vec![CellSpec::vertex("u"), CellSpec::new("e", &["a"], &["u"], &["w"])];
        let err = PrecubicalSet::from_specs([Label::from("a")], specs).unwrap_err();
        assert_eq!(err, ComplexError::UnknownCell { cell: "e".into(), face: "w".into() });
        let specs = vec![CellSpec::vertex("u"), CellSpec::vertex("u")];
        assert!(matches!(PrecubicalSet::from_specs([], specs), Err(ComplexError::DuplicateId(_))));
    }

    #[test]
    fn initial_must_be_a_vertex() {
        let sq = fixtures::filled_square("a", "b");
        assert!(matches!(Hda::new(sq.complex.clone(), "x"), Err(ComplexError::InitialNotVertex { dim: 2, .. })));
        assert!(Hda::new(sq.complex, "nope").is_err());
    }

    #[test]
    fn json_round_trip() {
        let sq = fixtures::filled_square("a", "b");
        let back = Hda::from_json(&sq.to_json()).unwrap();
        assert_eq!(back, sq);
    }

    #[test]
    fn final_field_is_reserved() {
        let text = r#"{"alphabet":[],"initial":"v","cells":[{"id":"v","labels":[]}],"final":["v"]}"#;
        assert!(Hda::from_json(text).is_ok());
        let text = r#"{"alphabet":[],"initial":"v","cells":[{"id":"v","labels":[]}],"final":["w"]}"#;
        assert!(Hda::from_json(text).is_err());
    }

    #[test]
    fn skeleton_drops_top_cells() {
        let sq = fixtures::filled_square("a", "b").complex;
        assert_eq!(sq.skeleton(1).counts_by_dim(), vec![4, 4]);
        let x = sq.get("x").unwrap();
        let a = sq.get("a").unwrap();
        assert!(matches!(sq.restrict(|r| r != a), Err(ComplexError::NotFaceClosed { .. })));
        assert!(sq.cofaces(a).contains(&(x, 2, Polarity::Zero)));
    }
}
