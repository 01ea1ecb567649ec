//! Conference matrices from the quadratic character, `Q = C + I`, Paley skew
//! Hadamard seeds, the doubling construction and seed resolution by order.
//!
//! Every constructor re-verifies its output before returning it.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{is_odd_prime_power, FieldError, PrimePowerField, MAX_FIELD_ORDER};
use crate::matrix::{MatrixError, SignMatrix};
use crate::verify::{is_conference_core, is_skew_hadamard, Witness};

#[derive(Debug, Error)]
pub enum SeedError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("Paley skew construction needs q = 3 (mod 4), got q = {0}")]
    WrongResidue(u32),
    #[error("input is not a skew Hadamard matrix: {0}")]
    NotSkewHadamard(Witness),
    #[error("no skew Hadamard seed of order {order}; attempted: {}", attempted.join("; "))]
    Unreachable {
        order: usize,
        attempted: Vec<String>,
    },
    #[error("constructed {what} failed self-check: {witness}")]
    SelfCheck { what: String, witness: Witness },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    Symmetric,
    SkewSymmetric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConferenceMatrix {
    pub q: usize,
    pub matrix: SignMatrix,
    pub symmetry: Symmetry,
    pub circulant: bool,
}

/// `C[i][j] = chi(alpha_j - alpha_i)` over the field's canonical ordering.
pub fn conference(field: &PrimePowerField) -> Result<ConferenceMatrix, SeedError> {
    let q = field.order() as usize;
    let matrix = SignMatrix::from_fn(q, q, |i, j| {
        field.chi_of_difference(j as u32, i as u32) as i32
    })?;
    let cert = is_conference_core(&matrix, q);
    if let Some(witness) = cert.witness {
        return Err(SeedError::SelfCheck {
            what: format!("conference matrix q={q}"),
            witness,
        });
    }
    let symmetry = if q % 4 == 1 {
        Symmetry::Symmetric
    } else {
        Symmetry::SkewSymmetric
    };
    let sign = match symmetry {
        Symmetry::Symmetric => 1,
        Symmetry::SkewSymmetric => -1,
    };
    let broken = (0..q)
        .flat_map(|i| (i + 1..q).map(move |j| (i, j)))
        .find(|&(i, j)| matrix.get(j, i) != sign * matrix.get(i, j));
    if let Some((i, j)) = broken {
        return Err(SeedError::SelfCheck {
            what: format!("conference matrix q={q} symmetry {symmetry:?}"),
            witness: Witness::Mismatch {
                row: j,
                col: i,
                actual: matrix.get(j, i) as i64,
                expected: (sign * matrix.get(i, j)) as i64,
            },
        });
    }
    let circulant = matrix.is_circulant();
    Ok(ConferenceMatrix {
        q,
        matrix,
        symmetry,
        circulant,
    })
}

/// `Q = C + I`.
pub fn q_matrix(c: &ConferenceMatrix) -> SignMatrix {
    let mut q = c.matrix.clone();
    for i in 0..c.q {
        q.set(i, i, q.get(i, i) + 1);
    }
    q
}

/// Where a skew Hadamard seed comes from: a base matrix plus some number of doublings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkewChain {
    /// `None` is the order-1 matrix `[1]`; `Some(q)` is the Paley seed of order `q + 1`.
    pub paley_q: Option<u32>,
    pub doublings: u32,
}

impl SkewChain {
    pub fn order(&self) -> usize {
        let base = self.paley_q.map_or(1, |q| q as usize + 1);
        base << self.doublings
    }
}

impl fmt::Display for SkewChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.paley_q {
            Some(q) => format!("Paley(q={q})"),
            None => "I1".to_string(),
        };
        let mut s = base;
        for _ in 0..self.doublings {
            s = format!("double({s})");
        }
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewHadamard {
    pub n: usize,
    pub matrix: SignMatrix,
    pub provenance: String,
    /// Set when the matrix came from a known chain and can be rebuilt from it.
    pub chain: Option<SkewChain>,
}

fn self_check(matrix: &SignMatrix, what: impl Into<String>) -> Result<(), SeedError> {
    let cert = is_skew_hadamard(matrix);
    match cert.witness {
        None => Ok(()),
        Some(witness) => Err(SeedError::SelfCheck {
            what: what.into(),
            witness,
        }),
    }
}

/// Bordered Paley matrix `H = I + S` of order `q + 1` for `q = 3 (mod 4)`.
pub fn paley_skew_hadamard(field: &PrimePowerField) -> Result<SkewHadamard, SeedError> {
    let q = field.order();
    if q % 4 != 3 {
        return Err(SeedError::WrongResidue(q));
    }
    let c = conference(field)?;
    let n = q as usize + 1;
    let matrix = SignMatrix::from_fn(n, n, |i, j| {
        let s = match (i, j) {
            (0, 0) => 0,
            (0, _) => 1,
            (_, 0) => -1,
            _ => c.matrix.get(i - 1, j - 1),
        };
        s + (i == j) as i32
    })?;
    let chain = SkewChain {
        paley_q: Some(q),
        doublings: 0,
    };
    self_check(&matrix, chain.to_string())?;
    Ok(SkewHadamard {
        n,
        matrix,
        provenance: chain.to_string(),
        chain: Some(chain),
    })
}

/// The order-1 skew Hadamard matrix `[1]`.
pub fn trivial_skew() -> SkewHadamard {
    SkewHadamard {
        n: 1,
        matrix: SignMatrix::identity(1).expect("order 1"),
        provenance: "I1".into(),
        chain: Some(SkewChain {
            paley_q: None,
            doublings: 0,
        }),
    }
}

/// `[[S + I, S + I], [S - I, -S + I]]` for `H = S + I`.
pub fn skew_double(h: &SkewHadamard) -> Result<SkewHadamard, SeedError> {
    if let Some(witness) = is_skew_hadamard(&h.matrix).witness {
        return Err(SeedError::NotSkewHadamard(witness));
    }
    let n = h.n;
    let s = skew_part(h);
    let matrix = SignMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, bj) = (i / n, j / n);
        let sv = s.get(i % n, j % n);
        let id = (i % n == j % n) as i32;
        match (bi, bj) {
            (0, _) => sv + id,
            (1, 0) => sv - id,
            _ => -sv + id,
        }
    })?;
    let provenance = format!("double({})", h.provenance);
    self_check(&matrix, provenance.clone())?;
    Ok(SkewHadamard {
        n: 2 * n,
        matrix,
        provenance,
        chain: h.chain.map(|c| SkewChain {
            doublings: c.doublings + 1,
            ..c
        }),
    })
}

/// Wraps an arbitrary matrix (e.g. read from disk) after checking it is skew Hadamard.
pub fn skew_from_matrix(
    matrix: SignMatrix,
    provenance: impl Into<String>,
) -> Result<SkewHadamard, SeedError> {
    if let Some(witness) = is_skew_hadamard(&matrix).witness {
        return Err(SeedError::NotSkewHadamard(witness));
    }
    Ok(SkewHadamard {
        n: matrix.rows(),
        matrix,
        provenance: provenance.into(),
        chain: None,
    })
}

/// `S = H - I`.
pub fn skew_part(h: &SkewHadamard) -> SignMatrix {
    let mut s = h.matrix.clone();
    for i in 0..h.n {
        s.set(i, i, s.get(i, i) - 1);
    }
    s
}

/// All chains that produce a skew Hadamard matrix of `order`, most preferred
/// first: a direct Paley seed, then by increasing number of doublings.
pub fn skew_chains(order: usize) -> Vec<SkewChain> {
    chain_search(order).0
}

fn chain_search(order: usize) -> (Vec<SkewChain>, Vec<String>) {
    let mut found = Vec::new();
    let mut attempted = Vec::new();
    if order == 0 {
        attempted.push("order 0 is empty".to_string());
        return (found, attempted);
    }
    let mut doublings = 0u32;
    let mut m = order;
    loop {
        let prefix = "double(".repeat(doublings as usize);
        let suffix = ")".repeat(doublings as usize);
        if m == 1 {
            found.push(SkewChain {
                paley_q: None,
                doublings,
            });
            break;
        }
        let q = m - 1;
        let valid = q % 4 == 3 && q <= MAX_FIELD_ORDER as usize && is_odd_prime_power(q as u32);
        if valid {
            found.push(SkewChain {
                paley_q: Some(q as u32),
                doublings,
            });
        } else {
            let why = if q % 4 != 3 {
                format!("{q} is not 3 mod 4")
            } else if q > MAX_FIELD_ORDER as usize {
                format!("{q} exceeds the field size cap")
            } else {
                format!("{q} is not a prime power")
            };
            attempted.push(format!("{prefix}Paley(q={q}){suffix}: {why}"));
        }
        if !m.is_multiple_of(2) {
            if m != order {
                attempted.push(format!(
                    "{prefix}order {m}{suffix}: {m} is odd, cannot halve further"
                ));
            }
            break;
        }
        m /= 2;
        doublings += 1;
    }
    (found, attempted)
}

/// Rebuilds the seed described by `chain`.
pub fn build_chain(chain: SkewChain) -> Result<SkewHadamard, SeedError> {
    let mut h = match chain.paley_q {
        Some(q) => paley_skew_hadamard(&PrimePowerField::of_order(q)?)?,
        None => trivial_skew(),
    };
    for _ in 0..chain.doublings {
        h = skew_double(&h)?;
    }
    Ok(h)
}

/// Resolves a skew Hadamard matrix of the given order, preferring a direct
/// Paley seed, then the chain with the fewest doublings.
pub fn skew_provider(order: usize) -> Result<SkewHadamard, SeedError> {
    let (found, attempted) = chain_search(order);
    match found.first() {
        Some(&chain) => build_chain(chain),
        None => Err(SeedError::Unreachable { order, attempted }),
    }
}
