//! JSON file formats. Complex numbers are `[re, im]` pairs; matrices are lists of rows.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingroup::{FiniteGroup, Irrep, Perm, DEFAULT_CLOSURE_CAP};
use crate::linalg::{CMat, CVec, C64};
use crate::qgroup::GroupDual;
use crate::qspace::{LinOp, QSet};

pub const SCHEMA_VERSION: u32 = 1;

/// Parses `text`, reporting failures with line and column.
pub fn parse_json<T: DeserializeOwned>(text: &str, source_name: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        source_name: source_name.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse_json(&read_text(path)?, &path.display().to_string())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn rows(m: &CMat) -> Vec<Vec<C64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn from_rows(rows: &[Vec<C64>], what: &str) -> Result<CMat> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|row| row.len() != c) {
        return Err(Error::Shape(format!("{what}: row {i} has length {}, expected {c}", rows[i].len())));
    }
    Ok(CMat::from_fn(r, c, |i, j| rows[i][j]))
}

/// One of: `named`, `table` (with optional `labels`), `permutations` (closed list, identity
/// first), or `generators` with `degree`. An optional `irreps` list fixes the dual's blocks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutations: Option<Vec<Perm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Perm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreps: Option<Vec<IrrepFile>>,
}

impl GroupFile {
    pub fn from_group(g: &FiniteGroup) -> Self {
        match g.permutations() {
            Some(p) => Self { name: Some(g.name().to_string()), permutations: Some(p.to_vec()), ..Self::default() },
            None => Self {
                name: Some(g.name().to_string()),
                table: Some(g.table()),
                labels: g.labels().map(<[String]>::to_vec),
                ..Self::default()
            },
        }
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        let given =
            [self.named.is_some(), self.table.is_some(), self.permutations.is_some(), self.generators.is_some()];
        if given.iter().filter(|&&b| b).count() != 1 {
            return Err(Error::Input("group file needs exactly one of named, table, permutations, generators".into()));
        }
        let name = self.name.clone().unwrap_or_else(|| "G".to_string());
        if let Some(n) = &self.named {
            return FiniteGroup::by_name(n);
        }
        if let Some(t) = &self.table {
            return FiniteGroup::from_table(&name, t, self.labels.clone());
        }
        if let Some(p) = &self.permutations {
            return FiniteGroup::from_permutations(&name, p.clone());
        }
        let gens = self.generators.as_deref().unwrap_or_default();
        let degree = self.degree.or_else(|| gens.first().map(Vec::len)).unwrap_or(0);
        FiniteGroup::from_generators(&name, degree, gens, DEFAULT_CLOSURE_CAP)
    }

    /// The dual, from the listed irreducibles if present, otherwise computed with `seed`.
    pub fn build_dual(&self, seed: u64, tol: f64) -> Result<GroupDual> {
        let g = self.build()?;
        match &self.irreps {
            Some(list) => {
                let irreps = list.iter().map(IrrepFile::build).collect::<Result<Vec<_>>>()?;
                GroupDual::new(g, irreps)
            }
            None => GroupDual::from_group(g, seed, tol),
        }
    }
}

pub fn parse_group_file(path: &Path) -> Result<FiniteGroup> {
    read_json::<GroupFile>(path)?.build()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrrepFile {
    pub dim: usize,
    /// One matrix per group element, in element order.
    pub matrices: Vec<Vec<Vec<C64>>>,
}

impl IrrepFile {
    pub fn from_irrep(r: &Irrep) -> Self {
        Self { dim: r.dim(), matrices: r.matrices().iter().map(rows).collect() }
    }

    pub fn build(&self) -> Result<Irrep> {
        let mats = self.matrices.iter().map(|m| from_rows(m, "irrep matrix")).collect::<Result<Vec<_>>>()?;
        if mats.iter().any(|m| m.nrows() != self.dim || m.ncols() != self.dim) {
            return Err(Error::Shape(format!("irrep matrices must be {0}x{0}", self.dim)));
        }
        Irrep::from_matrices(mats)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrrepsFile {
    pub group: String,
    pub irreps: Vec<IrrepFile>,
    /// Characters, one row per irreducible.
    pub characters: Vec<Vec<C64>>,
}

impl IrrepsFile {
    pub fn from_irreps(group: &FiniteGroup, irreps: &[Irrep]) -> Self {
        Self {
            group: group.name().to_string(),
            irreps: irreps.iter().map(IrrepFile::from_irrep).collect(),
            characters: irreps.iter().map(|r| r.character().to_vec()).collect(),
        }
    }
}

/// Operator in the matrix-unit basis of the quantum set with the given blocks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub blocks: Vec<usize>,
    pub matrix: Vec<Vec<C64>>,
}

impl OperatorFile {
    pub fn from_op(a: &LinOp) -> Self {
        Self { blocks: a.space().blocks().to_vec(), matrix: rows(a.matrix()) }
    }

    pub fn build(&self) -> Result<LinOp> {
        LinOp::new(QSet::new(&self.blocks)?, from_rows(&self.matrix, "operator")?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionBasis {
    /// Matrix-unit coefficients.
    Block,
    /// Coefficients `c_g` of `Σ_g c_g λ_g`.
    Lambda,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionFile {
    pub basis: ProjectionBasis,
    pub values: Vec<C64>,
}

impl ProjectionFile {
    pub fn block(p: &CVec) -> Self {
        Self { basis: ProjectionBasis::Block, values: p.iter().copied().collect() }
    }

    /// Block-basis vector on the dual.
    pub fn build(&self, dual: &GroupDual) -> Result<CVec> {
        let v = CVec::from_vec(self.values.clone());
        let want = match self.basis {
            ProjectionBasis::Block => dual.space().dim(),
            ProjectionBasis::Lambda => dual.order(),
        };
        if v.len() != want {
            return Err(Error::Shape(format!("projection has {} values, expected {want}", v.len())));
        }
        Ok(match self.basis {
            ProjectionBasis::Block => v,
            ProjectionBasis::Lambda => dual.to_block(&v),
        })
    }
}
