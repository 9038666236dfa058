//! JSON artifact formats. Every file is wrapped in the envelope
//! `{"kind", "version": 1, "payload"}`; matrices are stored either exactly
//! (monomial form) or densely as `{"rows", "cols", "data": [[re, im], ...]}`
//! row-major.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::classes::{ClassPartition, CommutingClass};
use crate::error::{Error, Result};
use crate::error_bases::{BasisElement, UnitaryErrorBasis};
use crate::finite::AbelianGroupSpec;
use crate::lie::{CartanSubalgebra, OrthogonalDecomposition};
use crate::linalg::DenseMatrix;
use crate::monomial::MonomialMatrix;
use crate::mub::{MubCollection, Provenance};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope {
    pub kind: String,
    pub version: u32,
    pub payload: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DenseJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<(f64, f64)>,
}

impl DenseJson {
    pub fn from_matrix(m: &DenseMatrix) -> Self {
        DenseJson {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().iter().map(|z| (z.re, z.im)).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<DenseMatrix> {
        DenseMatrix::from_data(
            self.rows,
            self.cols,
            self.data.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
        )
    }
}

/// Exact-or-dense matrix record.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixRecord {
    Monomial(MonomialMatrix),
    Dense(DenseJson),
}

impl MatrixRecord {
    pub fn from_element(e: &BasisElement) -> Self {
        match e {
            BasisElement::Monomial(m) => MatrixRecord::Monomial(m.clone()),
            BasisElement::Dense(m) => MatrixRecord::Dense(DenseJson::from_matrix(m)),
        }
    }

    pub fn to_element(&self) -> Result<BasisElement> {
        match self {
            MatrixRecord::Monomial(m) => Ok(BasisElement::Monomial(m.clone())),
            MatrixRecord::Dense(d) => Ok(BasisElement::Dense(d.to_matrix()?)),
        }
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        Ok(self.to_element()?.to_dense())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<Vec<u32>>,
    pub matrix: MatrixRecord,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorBasisFile {
    pub n: usize,
    pub index_group: Vec<u32>,
    pub elements: Vec<ElementRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionFile {
    pub n: usize,
    pub classes: Vec<Vec<ElementRecord>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MubsFile {
    pub n: usize,
    pub bases: Vec<DenseJson>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CartanFile {
    pub n: usize,
    pub basis: Vec<MatrixRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OdFile {
    pub n: usize,
    pub cartans: Vec<Vec<MatrixRecord>>,
}

pub fn error_basis_to_file(basis: &UnitaryErrorBasis) -> ErrorBasisFile {
    let labels: Vec<Option<Vec<u32>>> = match basis.index_map() {
        Some(ix) => ix.labels().iter().cloned().map(Some).collect(),
        None => vec![None; basis.elements().len()],
    };
    ErrorBasisFile {
        n: basis.dim(),
        index_group: basis
            .index_map()
            .map(|ix| ix.group().factors().to_vec())
            .unwrap_or_default(),
        elements: basis
            .elements()
            .iter()
            .zip(labels)
            .map(|(e, label)| ElementRecord { label, matrix: MatrixRecord::from_element(e) })
            .collect(),
    }
}

pub fn error_basis_from_file(file: &ErrorBasisFile) -> Result<UnitaryErrorBasis> {
    let elems: Vec<BasisElement> = file
        .elements
        .iter()
        .map(|r| r.matrix.to_element())
        .collect::<Result<_>>()?;
    if file.index_group.is_empty() {
        return UnitaryErrorBasis::new(file.n, elems);
    }
    let group = AbelianGroupSpec::new(file.index_group.clone())?;
    let labeled = file
        .elements
        .iter()
        .zip(elems)
        .map(|(r, e)| {
            let label = r
                .label
                .clone()
                .ok_or_else(|| Error::InvalidInput("indexed basis with unlabeled element".into()))?;
            Ok((label, e))
        })
        .collect::<Result<Vec<_>>>()?;
    UnitaryErrorBasis::new_indexed(file.n, group, labeled)
}

pub fn partition_to_file(p: &ClassPartition) -> PartitionFile {
    PartitionFile {
        n: p.dim(),
        classes: p
            .classes()
            .iter()
            .map(|c| {
                let labels: Vec<Option<Vec<u32>>> = match c.labels() {
                    Some(ls) => ls.iter().cloned().map(Some).collect(),
                    None => vec![None; c.members().len()],
                };
                c.members()
                    .iter()
                    .zip(labels)
                    .map(|(m, label)| ElementRecord { label, matrix: MatrixRecord::from_element(m) })
                    .collect()
            })
            .collect(),
    }
}

pub fn partition_from_file(file: &PartitionFile) -> Result<ClassPartition> {
    let classes = file
        .classes
        .iter()
        .map(|records| {
            let members: Vec<BasisElement> = records
                .iter()
                .map(|r| r.matrix.to_element())
                .collect::<Result<_>>()?;
            let labels: Option<Vec<Vec<u32>>> =
                records.iter().map(|r| r.label.clone()).collect();
            Ok(match labels {
                Some(ls) => CommutingClass::with_labels(file.n, members, ls),
                None => CommutingClass::new(file.n, members),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassPartition::new(file.n, classes))
}

pub fn mubs_to_file(m: &MubCollection) -> MubsFile {
    MubsFile {
        n: m.dim(),
        bases: m.bases().iter().map(DenseJson::from_matrix).collect(),
        provenance: m.provenance(),
    }
}

pub fn mubs_from_file(file: &MubsFile) -> Result<MubCollection> {
    let bases = file
        .bases
        .iter()
        .map(|b| b.to_matrix())
        .collect::<Result<Vec<_>>>()?;
    MubCollection::new(file.n, bases, file.provenance)
}

pub fn od_to_file(od: &OrthogonalDecomposition) -> OdFile {
    OdFile {
        n: od.dim(),
        cartans: od
            .cartans()
            .iter()
            .map(|c| {
                c.basis()
                    .iter()
                    .map(|m| MatrixRecord::Dense(DenseJson::from_matrix(m)))
                    .collect()
            })
            .collect(),
    }
}

/// OD file that keeps exact monomial components exact (used by the standard
/// OD, whose Cartan bases are monomial matrices).
pub fn od_file_from_elements(n: usize, cartans: &[Vec<BasisElement>]) -> OdFile {
    OdFile {
        n,
        cartans: cartans
            .iter()
            .map(|basis| basis.iter().map(MatrixRecord::from_element).collect())
            .collect(),
    }
}

pub fn od_from_file(file: &OdFile) -> Result<OrthogonalDecomposition> {
    let cartans = file
        .cartans
        .iter()
        .map(|records| {
            let basis = records
                .iter()
                .map(|r| r.to_dense())
                .collect::<Result<Vec<_>>>()?;
            CartanSubalgebra::new(file.n, basis)
        })
        .collect::<Result<Vec<_>>>()?;
    OrthogonalDecomposition::new(file.n, cartans)
}

pub fn cartan_from_file(file: &CartanFile) -> Result<CartanSubalgebra> {
    let basis = file
        .basis
        .iter()
        .map(|r| r.to_dense())
        .collect::<Result<Vec<_>>>()?;
    CartanSubalgebra::new(file.n, basis)
}

/// Wraps a payload in the versioned envelope.
pub fn wrap<T: Serialize>(kind: &str, payload: &T) -> Result<Envelope> {
    Ok(Envelope {
        kind: kind.to_string(),
        version: FORMAT_VERSION,
        payload: serde_json::to_value(payload)
            .map_err(|e| Error::InvalidInput(format!("serialize: {e}")))?,
    })
}

/// Unwraps an envelope, checking kind and version.
pub fn unwrap<T: for<'de> Deserialize<'de>>(envelope: &Envelope, kind: &str) -> Result<T> {
    if envelope.kind != kind {
        return Err(Error::InvalidInput(format!(
            "expected kind '{kind}', found '{}'",
            envelope.kind
        )));
    }
    if envelope.version != FORMAT_VERSION {
        return Err(Error::InvalidInput(format!(
            "unsupported format version {}",
            envelope.version
        )));
    }
    serde_json::from_value(envelope.payload.clone())
        .map_err(|e| Error::InvalidInput(format!("payload: {e}")))
}

/// Serializes an envelope and writes it atomically (write then rename).
pub fn write_envelope(path: &Path, envelope: &Envelope) -> Result<()> {
    let bytes = serde_json::to_vec_pretty(envelope)
        .map_err(|e| Error::InvalidInput(format!("serialize: {e}")))?;
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, &bytes).map_err(|e| Error::InvalidInput(format!("write {tmp:?}: {e}")))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| Error::InvalidInput(format!("rename to {path:?}: {e}")))?;
    Ok(())
}

pub fn read_envelope(path: &Path) -> Result<Envelope> {
    let bytes =
        std::fs::read(path).map_err(|e| Error::InvalidInput(format!("read {path:?}: {e}")))?;
    serde_json::from_slice(&bytes).map_err(|e| Error::InvalidInput(format!("parse {path:?}: {e}")))
}
