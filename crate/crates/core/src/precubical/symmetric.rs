use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;

use crate::base_cats::{BaseError, Label, Permutation, Polarity};

use super::{validate_precubical, CellRef, CellSpec, Complex, ComplexError, PrecubicalSet};

/// Materialisation never goes beyond this dimension (720 copies per cell).
pub const MAX_MATERIALIZED_DIM: usize = 6;

/// A permuted copy `(θ, x)` of a base cell; its labels are `λ_x ∘ θ⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SCell {
    pub theta: Permutation,
    pub base: CellRef,
}

impl SCell {
    pub fn new(theta: Permutation, base: CellRef) -> Self {
        SCell { theta, base }
    }

    pub fn identity_over(base: CellRef) -> Self {
        SCell { theta: Permutation::identity(0), base }
    }
}

/// The free symmetric precubical set on a base complex, computed on demand.
#[derive(Debug, Clone, Copy)]
pub struct Symmetrization<'a> {
    base: &'a PrecubicalSet,
}

pub fn symmetrize(x: &PrecubicalSet) -> Result<Symmetrization<'_>, ComplexError> {
    if let Some(v) = validate_precubical(x).first() {
        return Err(ComplexError::InvalidComplex(v.to_string()));
    }
    Ok(Symmetrization { base: x })
}

impl<'a> Symmetrization<'a> {
    pub fn base(&self) -> &'a PrecubicalSet {
        self.base
    }

    /// The copy `(id, x)`.
    pub fn canonical(&self, x: CellRef) -> SCell {
        SCell::new(Permutation::identity(self.base.cell_dim(x)), x)
    }

    fn check_arity(&self, s: &SCell) -> Result<usize, BaseError> {
        let n = self.base.cell_dim(s.base);
        if s.theta.arity() != n {
            return Err(BaseError::ArityMismatch { expected: n, found: s.theta.arity() });
        }
        Ok(n)
    }

    /// `(d_iθ, δ^k_{θ⁻¹(i)} x)`.
    pub fn sface(&self, s: &SCell, i: usize, k: Polarity) -> Result<SCell, BaseError> {
        let n = self.check_arity(s)?;
        if i == 0 || i > n {
            return Err(BaseError::IndexOutOfRange { index: i, arity: n });
        }
        let p = s.theta.inverse().apply(i);
        let face = self.base.cell(s.base).face(p, k);
        Ok(SCell::new(s.theta.induced_face(i)?, face))
    }

    /// `(τθ, x)`.
    pub fn saction(&self, tau: &Permutation, s: &SCell) -> Result<SCell, BaseError> {
        self.check_arity(s)?;
        Ok(SCell::new(tau.compose(&s.theta)?, s.base))
    }

    pub fn scells_over(&self, x: CellRef) -> Vec<SCell> {
        Permutation::all(self.base.cell_dim(x)).map(|theta| SCell::new(theta, x)).collect()
    }

    /// Every SCell, grouped by base cell in base order.
    pub fn cells(&self, max_dim: usize) -> Result<Vec<SCell>, ComplexError> {
        let cap = max_dim.min(MAX_MATERIALIZED_DIM);
        let dim = self.base.max_dim();
        if dim > cap {
            return Err(ComplexError::DimensionCap { dim, cap });
        }
        Ok(self.base.cell_refs().flat_map(|x| self.scells_over(x)).collect())
    }

    pub fn scell_id(&self, s: &SCell) -> String {
        format!("{}.{}", s.theta, self.base.id(s.base))
    }

    /// `s*(SX)`: every SCell as an ordinary cell, faces given by `sface`.
    pub fn forget_symmetry(&self, max_dim: usize) -> Result<PrecubicalSet, ComplexError> {
        let cells = self.cells(max_dim)?;
        let specs = cells
            .iter()
            .map(|s| {
                let n = s.theta.arity();
                let faces =
                    |k| (1..=n).map(|i| self.scell_id(&self.sface(s, i, k).expect("in range"))).collect::<Vec<_>>();
                CellSpec {
                    id: self.scell_id(s),
                    labels: self.labels(s).into_owned(),
                    d0: faces(Polarity::Zero),
                    d1: faces(Polarity::One),
                }
            })
            .collect();
        PrecubicalSet::from_specs(self.base.alphabet().iter().cloned(), specs)
    }

    /// Eager copy with an explicit permutation-action table.
    pub fn materialize(&self, max_dim: usize) -> Result<SymmetricComplex, ComplexError> {
        let complex = self.forget_symmetry(max_dim)?;
        let mut action = HashMap::new();
        for s in self.cells(max_dim)? {
            let from = complex.get(&self.scell_id(&s))?;
            for tau in Permutation::all(s.theta.arity()) {
                let to = self.saction(&tau, &s).expect("arity matches");
                action.insert((from, tau), complex.get(&self.scell_id(&to))?);
            }
        }
        Ok(SymmetricComplex { complex, action })
    }
}

impl Complex for Symmetrization<'_> {
    type Cell = SCell;

    fn labels(&self, s: &SCell) -> Cow<'_, [Label]> {
        let base = self.base.cell_labels(s.base);
        Cow::Owned(base.permuted(&s.theta).into_labels())
    }

    fn dim(&self, s: &SCell) -> usize {
        s.theta.arity()
    }

    fn face(&self, s: &SCell, i: usize, k: Polarity) -> Option<SCell> {
        self.sface(s, i, k).ok()
    }

    fn cell_name(&self, s: &SCell) -> String {
        self.scell_id(s)
    }
}

/// A precubical set together with an explicit action of the symmetric groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricComplex {
    pub complex: PrecubicalSet,
    pub action: HashMap<(CellRef, Permutation), CellRef>,
}

impl SymmetricComplex {
    /// Build from an ordinary complex and action entries `(θ, from, to)` given by id.
    /// Identity actions are filled in automatically.
    pub fn from_parts(complex: PrecubicalSet, entries: &[(Permutation, &str, &str)]) -> Result<Self, ComplexError> {
        let mut action = HashMap::new();
        for r in complex.cell_refs() {
            action.insert((r, Permutation::identity(complex.cell_dim(r))), r);
        }
        for (theta, from, to) in entries {
            action.insert((complex.get(from)?, theta.clone()), complex.get(to)?);
        }
        Ok(SymmetricComplex { complex, action })
    }

    pub fn act(&self, theta: &Permutation, x: CellRef) -> Option<CellRef> {
        self.action.get(&(x, theta.clone())).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymViolation {
    Precubical(String),
    MissingAction { cell: String, theta: Permutation },
    ActionLabels { cell: String, theta: Permutation },
    IdentityLaw { cell: String },
    CompositionLaw { cell: String, tau: Permutation, sigma: Permutation },
    Interchange { cell: String, theta: Permutation, i: usize, k: u8 },
}

impl fmt::Display for SymViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymViolation::Precubical(v) => f.write_str(v),
            SymViolation::MissingAction { cell, theta } => write!(f, "{theta}·{cell} is undefined"),
            SymViolation::ActionLabels { cell, theta } => write!(f, "{theta}·{cell} has the wrong labels"),
            SymViolation::IdentityLaw { cell } => write!(f, "id·{cell} differs from {cell}"),
            SymViolation::CompositionLaw { cell, tau, sigma } => {
                write!(f, "{tau}·({sigma}·{cell}) differs from ({tau}{sigma})·{cell}")
            }
            SymViolation::Interchange { cell, theta, i, k } => {
                write!(f, "face d{k}_{i} of {theta}·{cell} breaks the interchange law")
            }
        }
    }
}

/// Checks labels, group-action laws and `δ^k_i(θ·x) = d_iθ · δ^k_{θ⁻¹(i)} x`.
pub fn validate_symmetric(s: &SymmetricComplex) -> Vec<SymViolation> {
    let x = &s.complex;
    let mut out: Vec<SymViolation> =
        validate_precubical(x).into_iter().map(|v| SymViolation::Precubical(v.to_string())).collect();
    if !out.is_empty() {
        return out;
    }
    for r in x.cell_refs() {
        let n = x.cell_dim(r);
        let id = x.id(r).to_string();
        let perms: Vec<Permutation> = Permutation::all(n).collect();
        let mut total = true;
        for theta in &perms {
            match s.act(theta, r) {
                None => {
                    out.push(SymViolation::MissingAction { cell: id.clone(), theta: theta.clone() });
                    total = false;
                }
                Some(t) => {
                    if *x.cell_labels(t) != x.cell_labels(r).permuted(theta) {
                        out.push(SymViolation::ActionLabels { cell: id.clone(), theta: theta.clone() });
                    }
                }
            }
        }
        if !total {
            continue;
        }
        if s.act(&Permutation::identity(n), r) != Some(r) {
            out.push(SymViolation::IdentityLaw { cell: id.clone() });
        }
        for sigma in &perms {
            let sx = s.act(sigma, r).expect("total");
            for tau in &perms {
                let lhs = s.act(tau, sx);
                let rhs = s.act(&tau.compose(sigma).expect("same arity"), r);
                if lhs != rhs {
                    out.push(SymViolation::CompositionLaw { cell: id.clone(), tau: tau.clone(), sigma: sigma.clone() });
                }
            }
        }
        for theta in &perms {
            let tx = s.act(theta, r).expect("total");
            for i in 1..=n {
                let d = theta.induced_face(i).expect("in range");
                let p = theta.inverse().apply(i);
                for k in Polarity::both() {
                    let lhs = x.cell(tx).face(i, k);
                    let rhs = s.act(&d, x.cell(r).face(p, k));
                    if Some(lhs) != rhs {
                        out.push(SymViolation::Interchange { cell: id.clone(), theta: theta.clone(), i, k: k.bit() });
                    }
                }
            }
        }
    }
    out
}
