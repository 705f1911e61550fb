//! Residue-class structure: cofactor gcds, partitions of a set modulo `q`
//! and modulo `p = g_1 * ... * g_k`, and the fully-distributed predicate.

use num_integer::Integer;
use serde::Serialize;

use crate::dilates::DilateTuple;
use crate::error::{Error, Result};
use crate::intset::Set;
use crate::scalar::Element;

/// `g_i = gcd(|l_j| : j != i)`. For `k = 1` the single entry is 0 ("mod 0",
/// no constraint).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CofactorGcds {
    g: Vec<u64>,
}

impl CofactorGcds {
    pub fn as_slice(&self) -> &[u64] {
        &self.g
    }

    pub fn get(&self, i: usize) -> u64 {
        self.g[i]
    }

    /// `p = g_1 * ... * g_k`, `None` on overflow.
    pub fn product(&self) -> Option<u64> {
        self.g.iter().try_fold(1u64, |acc, &g| acc.checked_mul(g))
    }
}

pub fn cofactor_gcds(lambdas: &DilateTuple) -> Result<CofactorGcds> {
    let abs: Vec<u64> = lambdas.coeffs().iter().map(|c| c.unsigned_abs()).collect();
    let g: Vec<u64> = (0..abs.len())
        .map(|i| {
            abs.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(0u64, |g, (_, &x)| g.gcd(&x))
        })
        .collect();
    for i in 0..g.len() {
        if abs[i].gcd(&g[i]) != 1 {
            return Err(Error::InvalidTuple(format!(
                "gcd(l_{i}, g_{i}) = {} for {lambdas:?}",
                abs[i].gcd(&g[i])
            )));
        }
        for j in i + 1..g.len() {
            if g[i].gcd(&g[j]) != 1 {
                return Err(Error::InvalidTuple(format!(
                    "cofactor gcds g_{i} = {} and g_{j} = {} are not coprime",
                    g[i], g[j]
                )));
            }
        }
    }
    Ok(CofactorGcds { g })
}

/// One residue class `A_j = offset + q * quotient`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueClass<T: Element> {
    pub offset: T,
    pub quotient: Set<T>,
    pub members: Set<T>,
}

/// Partition of a set into its nonempty residue classes mod `q`, ordered by
/// offset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResiduePartition<T: Element> {
    pub modulus: T,
    pub classes: Vec<ResidueClass<T>>,
}

impl<T: Element> ResiduePartition<T> {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Index of the class with the given residue.
    pub fn class_of(&self, residue: T) -> Option<usize> {
        let r = residue.mod_floor(&self.modulus);
        self.classes.binary_search_by(|c| c.offset.cmp(&r)).ok()
    }

    pub fn min_class_size(&self) -> usize {
        self.classes.iter().map(|c| c.members.len()).min().unwrap_or(0)
    }
}

fn positive_modulus<T: Element>(q: T) -> Result<()> {
    if q <= T::zero() {
        Err(Error::NonpositiveModulus(q.to_string()))
    } else {
        Ok(())
    }
}

pub fn residue_partition<T: Element>(a: &Set<T>, q: T) -> Result<ResiduePartition<T>> {
    if a.is_empty() {
        return Err(Error::EmptyOperand);
    }
    positive_modulus(q)?;
    let mut tagged: Vec<(T, T)> = a.iter().map(|&x| (x.mod_floor(&q), x)).collect();
    // stable: members stay ascending inside each class
    tagged.sort_by_key(|&(r, _)| r);
    let mut classes = Vec::new();
    for chunk in tagged.chunk_by(|x, y| x.0 == y.0) {
        let offset = chunk[0].0;
        let members: Vec<T> = chunk.iter().map(|&(_, x)| x).collect();
        let quotient: Vec<T> = members.iter().map(|&x| (x - offset).div_floor(&q)).collect();
        classes.push(ResidueClass {
            offset,
            quotient: Set::from_sorted(quotient),
            members: Set::from_sorted(members),
        });
    }
    Ok(ResiduePartition { modulus: q, classes })
}

/// Whether `a` meets every residue class mod `q`.
pub fn is_fully_distributed<T: Element>(a: &Set<T>, q: T) -> Result<bool> {
    positive_modulus(q)?;
    if q.is_one() {
        return Ok(true);
    }
    if q.widen() > a.len() as i128 {
        return Ok(false);
    }
    let mut residues: Vec<T> = a.iter().map(|x| x.mod_floor(&q)).collect();
    residues.sort_unstable();
    residues.dedup();
    Ok(residues.len() as i128 == q.widen())
}

/// FD mod `g` where `g = 0` (the `k = 1` cofactor) imposes no constraint.
pub fn is_fd_mod_cofactor<T: Element>(a: &Set<T>, g: u64) -> Result<bool> {
    if g == 0 {
        return Ok(true);
    }
    is_fully_distributed(a, modulus::<T>(g)?)
}

pub(crate) fn modulus<T: Element>(g: u64) -> Result<T> {
    T::narrow(g as i128).ok_or_else(|| Error::Overflow(format!("modulus {g}")))
}

/// Cell `P_e = offset + p * quotient` of the partition mod `p`, with the
/// coarse class `e_i` it lies in for every `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FineCell<T: Element> {
    pub offset: T,
    pub quotient: Set<T>,
    pub members: Set<T>,
    pub coarse_index: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinePartition<T: Element> {
    pub cofactors: CofactorGcds,
    pub modulus: T,
    /// Partition mod `g_i` for each `i`.
    pub coarse: Vec<ResiduePartition<T>>,
    pub cells: Vec<FineCell<T>>,
}

impl<T: Element> FinePartition<T> {
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// The coarse class `A_{i e_i}` containing cell `e`.
    pub fn coarse_class(&self, e: usize, i: usize) -> &ResidueClass<T> {
        &self.coarse[i].classes[self.cells[e].coarse_index[i]]
    }
}

pub fn fine_partition<T: Element>(lambdas: &DilateTuple, a: &Set<T>) -> Result<FinePartition<T>> {
    if a.is_empty() {
        return Err(Error::EmptyOperand);
    }
    if lambdas.k() < 2 {
        return Err(Error::KTooSmall(lambdas.k()));
    }
    let cofactors = cofactor_gcds(lambdas)?;
    let p = cofactors
        .product()
        .ok_or_else(|| Error::Overflow("product of cofactor gcds".into()))?;
    let p: T = modulus(p)?;
    let coarse = cofactors
        .as_slice()
        .iter()
        .map(|&g| residue_partition(a, modulus::<T>(g)?))
        .collect::<Result<Vec<_>>>()?;
    let cells = residue_partition(a, p)?
        .classes
        .into_iter()
        .map(|cls| {
            let coarse_index = coarse
                .iter()
                .map(|part| {
                    part.class_of(cls.offset)
                        .expect("a cell's residue occurs in every coarse partition")
                })
                .collect();
            FineCell {
                offset: cls.offset,
                quotient: cls.quotient,
                members: cls.members,
                coarse_index,
            }
        })
        .collect();
    Ok(FinePartition {
        cofactors,
        modulus: p,
        coarse,
        cells,
    })
}
