//! Which Hadamard orders `4t` the implemented routes reach.
//!
//! A route is listed only after its matrix has been built and verified.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::seeds::{build_chain, skew_chains, SkewChain};
use crate::theorem::{first_passing, validate_params, ConstructionParams, Theorem, TheoremError};
use crate::verify::is_skew_hadamard;

/// Every valid parameter set of `theorem` with order at most `max_order`, by increasing order.
pub fn enumerate_params(theorem: Theorem, max_order: usize) -> Vec<ConstructionParams> {
    let mut out = Vec::new();
    for s in 1u32.. {
        let q = theorem.q_for(s);
        let order = 2 * q as usize * (s as usize + 1);
        if order > max_order {
            break;
        }
        if let Ok(p) = validate_params(theorem, q, s as i64) {
            out.push(p);
        }
    }
    out.sort_by_key(|p| p.order);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RouteKind {
    Paley,
    Doubling,
    Theorem,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub order: usize,
    pub route: RouteKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<Theorem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    pub corollary_3_1: bool,
    pub corollary_3_2: bool,
    /// The seed chain: the matrix itself for seed routes, the `S` seed for theorem routes.
    pub seed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<String>,
}

impl CatalogEntry {
    fn from_chain(chain: SkewChain) -> Self {
        let route = if chain.doublings == 0 {
            RouteKind::Paley
        } else {
            RouteKind::Doubling
        };
        CatalogEntry {
            order: chain.order(),
            route,
            theorem: None,
            q: chain.paley_q,
            s: None,
            corollary_3_1: false,
            corollary_3_2: false,
            seed: chain.to_string(),
            m_grid: None,
            n_grid: None,
        }
    }

    fn sort_key(&self) -> (usize, RouteKind, Option<Theorem>, Option<u32>, String) {
        (
            self.order,
            self.route,
            self.theorem,
            self.q,
            self.seed.clone(),
        )
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.route {
            RouteKind::Paley | RouteKind::Doubling => {
                let kind = if self.route == RouteKind::Paley {
                    "paley"
                } else {
                    "doubling"
                };
                write!(f, "{:>6}  {:<8}  {}", self.order, kind, self.seed)
            }
            RouteKind::Theorem => {
                write!(
                    f,
                    "{:>6}  {:<8}  {} q={} s={} seed={} M={} N={}",
                    self.order,
                    "theorem",
                    self.theorem.map(|t| t.id()).unwrap_or("?"),
                    self.q.unwrap_or(0),
                    self.s.unwrap_or(0),
                    self.seed,
                    self.m_grid.as_deref().unwrap_or("?"),
                    self.n_grid.as_deref().unwrap_or("?"),
                )?;
                if self.corollary_3_1 {
                    f.write_str(" corollary=3.1")?;
                }
                if self.corollary_3_2 {
                    f.write_str(" corollary=3.2")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Catalog {
    pub max_order: usize,
    pub entry: Vec<CatalogEntry>,
    /// Orders `4t <= max_order` with no verified route.
    pub unreached: Vec<usize>,
}

impl Catalog {
    pub fn reached(&self, order: usize) -> bool {
        self.entry.iter().any(|e| e.order == order)
    }

    pub fn to_toml(&self) -> Result<String, toml::ser::Error> {
        toml::to_string(self)
    }
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>6}  {:<8}  route", "order", "kind")?;
        for t in 1..=self.max_order / 4 {
            let order = 4 * t;
            let mut any = false;
            for e in self.entry.iter().filter(|e| e.order == order) {
                writeln!(f, "{e}")?;
                any = true;
            }
            if !any {
                writeln!(f, "{order:>6}  unreached")?;
            }
        }
        let reached = self.max_order / 4 - self.unreached.len();
        writeln!(
            f,
            "{reached} of {} orders 4t <= {} reached",
            self.max_order / 4,
            self.max_order
        )
    }
}

/// Builds and verifies every route to an order `4t <= max_order`. Theorem
/// routes use the first passing block choice of the full search family.
pub fn coverage(max_order: usize) -> Result<Catalog, TheoremError> {
    let orders: Vec<usize> = (1..=max_order / 4).map(|t| 4 * t).collect();
    let mut entries: Vec<CatalogEntry> = orders
        .par_iter()
        .map(|&order| -> Result<Vec<CatalogEntry>, TheoremError> {
            let mut found = Vec::new();
            for chain in skew_chains(order) {
                let h = build_chain(chain)?;
                if is_skew_hadamard(&h.matrix).passed() {
                    found.push(CatalogEntry::from_chain(chain));
                }
            }
            Ok(found)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();

    let params: Vec<ConstructionParams> = Theorem::ALL
        .iter()
        .flat_map(|&t| enumerate_params(t, max_order))
        .collect();
    let theorem_entries: Vec<Option<CatalogEntry>> = params
        .par_iter()
        .map(|p| {
            Ok(first_passing(p, usize::MAX)?.map(|r| CatalogEntry {
                order: p.order,
                route: RouteKind::Theorem,
                theorem: Some(p.theorem),
                q: Some(p.q),
                s: Some(p.s),
                corollary_3_1: p.corollary_3_1,
                corollary_3_2: p.corollary_3_2,
                seed: p.seed_chain.to_string(),
                m_grid: Some(r.m_spec.encoding()),
                n_grid: Some(r.n_spec.encoding()),
            }))
        })
        .collect::<Result<_, TheoremError>>()?;
    entries.extend(theorem_entries.into_iter().flatten());
    entries.sort_by_key(CatalogEntry::sort_key);

    let unreached = orders
        .into_iter()
        .filter(|&o| !entries.iter().any(|e| e.order == o))
        .collect();
    Ok(Catalog {
        max_order,
        entry: entries,
        unreached,
    })
}
