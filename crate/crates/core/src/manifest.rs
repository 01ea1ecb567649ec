//! TOML manifests recording how an `HMAT` artifact was made, and rebuilding
//! the artifact from its manifest.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{BlockError, BlockSpec};
use crate::field::{FieldError, PrimePowerField};
use crate::hmat::{HmatFile, HmatKind};
use crate::matrix::SignMatrix;
use crate::seeds::{build_chain, conference, skew_double, SeedError, SkewChain, SkewHadamard};
use crate::theorem::{
    construct_with, validate_params, ConstructionResult, ParamError, Theorem, TheoremError,
};
use crate::verify::{
    is_conference_core, is_skew_hadamard, Method, Verdict, VerificationCertificate, Witness,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("manifest is not valid TOML: {0}")]
    Decode(#[from] toml::de::Error),
    #[error("manifest could not be encoded: {0}")]
    Encode(#[from] toml::ser::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Theorem(#[from] TheoremError),
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error("unknown artifact kind {0:?}")]
    Kind(String),
    #[error("{0} artifacts depend on an input file and cannot be rebuilt from the manifest alone")]
    NotReproducible(&'static str),
    #[error("rebuilt construction has verdict {got}, manifest records {recorded}")]
    VerdictChanged { recorded: Verdict, got: Verdict },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub q: u32,
    pub characteristic: u32,
    pub degree: u32,
    pub modulus: String,
    pub element_order: String,
    pub conference_circulant: bool,
}

impl FieldRecord {
    fn of(field: &PrimePowerField, circulant: bool) -> Self {
        FieldRecord {
            q: field.order(),
            characteristic: field.characteristic(),
            degree: field.degree(),
            modulus: field.modulus_text(),
            element_order: field.element_order_text(),
            conference_circulant: circulant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Construction {
    Theorem {
        theorem: Theorem,
        q: u32,
        s: u32,
        m_case: String,
        m_grid: String,
        n_grid: String,
        n_label: String,
        corollary_3_1: bool,
        corollary_3_2: bool,
        seed: String,
        seed_chain: SkewChain,
        commutator_residual_zero: bool,
        gram_residual_zero: bool,
    },
    Conference {
        q: u32,
        symmetric: bool,
    },
    Paley {
        q: u32,
    },
    SkewChain {
        chain: SkewChain,
        provenance: String,
    },
    /// Doubling of a matrix read from a file with no rebuildable chain.
    DoubleFile {
        input: String,
        input_provenance: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub verdict: Verdict,
    pub method: Method,
    pub checks: Vec<String>,
    pub witness: Option<Witness>,
}

impl From<&VerificationCertificate> for CertificateRecord {
    fn from(c: &VerificationCertificate) -> Self {
        CertificateRecord {
            verdict: c.verdict,
            method: c.method,
            checks: c.checks.clone(),
            witness: c.witness.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub artifact: String,
    pub order: usize,
    pub construction: Construction,
    pub field: Option<FieldRecord>,
    pub certificate: CertificateRecord,
}

impl Manifest {
    pub fn to_toml(&self) -> Result<String, ManifestError> {
        Ok(toml::to_string(self)?)
    }

    pub fn from_toml(text: &str) -> Result<Self, ManifestError> {
        Ok(toml::from_str(text)?)
    }

    pub fn kind(&self) -> Result<HmatKind, ManifestError> {
        self.artifact
            .parse()
            .map_err(|_| ManifestError::Kind(self.artifact.clone()))
    }
}

/// A matrix file together with its manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub file: HmatFile,
    pub manifest: Manifest,
}

fn manifest(
    kind: HmatKind,
    order: usize,
    construction: Construction,
    field: Option<FieldRecord>,
    cert: &VerificationCertificate,
) -> Manifest {
    Manifest {
        tool_version: TOOL_VERSION.to_string(),
        artifact: kind.to_string(),
        order,
        construction,
        field,
        certificate: cert.into(),
    }
}

pub fn conference_artifact(q: u32) -> Result<Artifact, ManifestError> {
    let field = PrimePowerField::of_order(q)?;
    let c = conference(&field)?;
    let cert = is_conference_core(&c.matrix, c.q);
    let construction = Construction::Conference {
        q,
        symmetric: c.symmetry == crate::seeds::Symmetry::Symmetric,
    };
    Ok(Artifact {
        manifest: manifest(
            HmatKind::Conference,
            c.q,
            construction,
            Some(FieldRecord::of(&field, c.circulant)),
            &cert,
        ),
        file: HmatFile::new(HmatKind::Conference, c.matrix),
    })
}

/// Artifact for a seed with a known chain; a bare Paley seed is recorded as such.
pub fn chain_artifact(chain: SkewChain) -> Result<Artifact, ManifestError> {
    let h = build_chain(chain)?;
    Ok(seed_artifact(&h, chain))
}

fn seed_artifact(h: &SkewHadamard, chain: SkewChain) -> Artifact {
    let cert = is_skew_hadamard(&h.matrix);
    let (construction, field) = match chain {
        SkewChain {
            paley_q: Some(q),
            doublings: 0,
        } => {
            let field = PrimePowerField::of_order(q).expect("chain validated");
            let circulant = field.degree() == 1;
            (
                Construction::Paley { q },
                Some(FieldRecord::of(&field, circulant)),
            )
        }
        _ => (
            Construction::SkewChain {
                chain,
                provenance: h.provenance.clone(),
            },
            None,
        ),
    };
    Artifact {
        manifest: manifest(HmatKind::Skew, h.n, construction, field, &cert),
        file: HmatFile::new(HmatKind::Skew, h.matrix.clone()),
    }
}

/// Doubles a skew Hadamard matrix read from `input`. When the input's own
/// manifest names a chain, the result is recorded as that chain plus one doubling.
pub fn double_artifact(
    input: &SignMatrix,
    input_name: &str,
    input_manifest: Option<&Manifest>,
) -> Result<Artifact, ManifestError> {
    let chain = input_manifest.and_then(|m| match &m.construction {
        Construction::Paley { q } => Some(SkewChain {
            paley_q: Some(*q),
            doublings: 0,
        }),
        Construction::SkewChain { chain, .. } => Some(*chain),
        _ => None,
    });
    // the recorded chain is only trusted when it rebuilds the input exactly
    let chain = chain.filter(|c| build_chain(*c).is_ok_and(|h| &h.matrix == input));
    let provenance = match chain {
        Some(c) => c.to_string(),
        None => format!("file({input_name})"),
    };
    let mut h = crate::seeds::skew_from_matrix(input.clone(), provenance.clone())?;
    h.chain = chain;
    let doubled = skew_double(&h)?;
    match doubled.chain {
        Some(c) => Ok(seed_artifact(&doubled, c)),
        None => {
            let cert = is_skew_hadamard(&doubled.matrix);
            let construction = Construction::DoubleFile {
                input: input_name.to_string(),
                input_provenance: provenance,
            };
            Ok(Artifact {
                manifest: manifest(HmatKind::Skew, doubled.n, construction, None, &cert),
                file: HmatFile::new(HmatKind::Skew, doubled.matrix),
            })
        }
    }
}

/// Manifest for a theorem construction, passing or not.
pub fn theorem_manifest(r: &ConstructionResult) -> Manifest {
    let p = &r.params;
    let field = PrimePowerField::of_order(p.q).expect("params validated");
    let circulant = field.degree() == 1;
    let construction = Construction::Theorem {
        theorem: p.theorem,
        q: p.q,
        s: p.s,
        m_case: p.theorem.m_kind().name().to_string(),
        m_grid: r.m_spec.encoding(),
        n_grid: r.n_spec.encoding(),
        n_label: r.n_spec.label.clone(),
        corollary_3_1: p.corollary_3_1,
        corollary_3_2: p.corollary_3_2,
        seed: p.seed_chain.to_string(),
        seed_chain: p.seed_chain,
        commutator_residual_zero: r.commutator_residual_zero,
        gram_residual_zero: r.gram_residual_zero,
    };
    manifest(
        HmatKind::Hadamard,
        p.order,
        construction,
        Some(FieldRecord::of(&field, circulant)),
        &r.certificate,
    )
}

/// The artifact for a passing construction.
pub fn theorem_artifact(r: &ConstructionResult) -> Option<Artifact> {
    let matrix = r.matrix.clone()?;
    Some(Artifact {
        manifest: theorem_manifest(r),
        file: HmatFile::new(HmatKind::Hadamard, matrix),
    })
}

/// Rebuilds the matrix a manifest describes. Theorem manifests whose recorded
/// verdict is FAIL rebuild to `None`.
pub fn reproduce(m: &Manifest) -> Result<Option<HmatFile>, ManifestError> {
    let kind = m.kind()?;
    let check = |got: Verdict| {
        if got == m.certificate.verdict {
            Ok(())
        } else {
            Err(ManifestError::VerdictChanged {
                recorded: m.certificate.verdict,
                got,
            })
        }
    };
    let file = match &m.construction {
        Construction::Theorem {
            theorem,
            q,
            s,
            m_grid,
            n_grid,
            n_label,
            ..
        } => {
            let params = validate_params(*theorem, *q, *s as i64)?;
            let m_spec: BlockSpec = m_grid.parse()?;
            let n_spec = n_grid.parse::<BlockSpec>()?.relabel(n_label.clone());
            let r = construct_with(&params, &m_spec, &n_spec)?;
            check(r.certificate.verdict)?;
            r.matrix.map(|h| HmatFile::new(kind, h))
        }
        Construction::Conference { q, .. } => {
            let a = conference_artifact(*q)?;
            check(a.manifest.certificate.verdict)?;
            Some(a.file)
        }
        Construction::Paley { q } => {
            let a = chain_artifact(SkewChain {
                paley_q: Some(*q),
                doublings: 0,
            })?;
            Some(a.file)
        }
        Construction::SkewChain { chain, .. } => Some(chain_artifact(*chain)?.file),
        Construction::DoubleFile { .. } => {
            return Err(ManifestError::NotReproducible("double-file"))
        }
    };
    Ok(file)
}
