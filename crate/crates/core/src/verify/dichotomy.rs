//! The two distribution dichotomies: a class quotient (or a cell quotient)
//! is either fully distributed, or a size inequality with a gap holds.

use serde::Serialize;

use super::{q, Inequality};
use crate::dilates::{dilate_sum, mixed_dilate_sum, DilateTuple};
use crate::error::{Error, Result};
use crate::num_str;
use crate::residue::{cofactor_gcds, fine_partition, is_fd_mod_cofactor, residue_partition};
use crate::IntSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DichotomyKind {
    /// One class `A_ij` mod `g_i`.
    Class,
    /// One cell `P_e` mod `p = g_1 * ... * g_k`.
    Cell,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    #[serde(rename = "FD")]
    Fd,
    #[serde(rename = "SIZE_GAP")]
    SizeGap,
}

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyReport {
    pub kind: DichotomyKind,
    pub lambdas: DilateTuple,
    pub set: IntSet,
    /// `[i, j]` for a class; `[e, e_1, ..., e_k]` for a cell.
    pub witnesses: Vec<usize>,
    /// The quotient whose distribution is tested.
    pub quotient: IntSet,
    /// The quotient is FD mod every modulus it is tested against.
    pub fd: bool,
    /// The size inequality, evaluated whatever the branch.
    pub size_gap: Inequality,
    /// `|outer \ inner|` for the two sums compared by `size_gap`.
    #[serde(rename = "q", serialize_with = "num_str::display")]
    pub q: usize,
    /// `|A_iw| = |A'_iw|` for every `w` (class reports only).
    pub quotient_sizes_match: Option<bool>,
    pub branch: Option<Branch>,
    pub holds: bool,
}

impl DichotomyReport {
    fn decide(mut self) -> Self {
        self.branch = if self.fd {
            Some(Branch::Fd)
        } else if self.size_gap.holds {
            Some(Branch::SizeGap)
        } else {
            None
        };
        self.holds = self.branch.is_some();
        self
    }
}

fn require_reduced(a: &IntSet) -> Result<()> {
    if a.is_empty() {
        return Err(Error::EmptyOperand);
    }
    if a.len() == 1 {
        return Err(Error::NotReduced(format!("{a} is a singleton")));
    }
    if !a.is_reduced()? {
        return Err(Error::NotReduced(a.to_string()));
    }
    Ok(())
}

pub(crate) fn require_k2(lambdas: &DilateTuple) -> Result<()> {
    if lambdas.k() < 2 {
        return Err(Error::KTooSmall(lambdas.k()));
    }
    Ok(())
}

/// Class `(i, j)`: either `A'_ij` is FD mod `g_i`, or
/// `|l_i*A_ij + sum_{c != i} l_c*A| >= |sum_c l_c*A_ij| + min_w |A_iw|`.
pub fn verify_dist1(lambdas: &DilateTuple, a: &IntSet, i: usize, j: usize) -> Result<DichotomyReport> {
    require_k2(lambdas)?;
    require_reduced(a)?;
    if i >= lambdas.k() {
        return Err(Error::IndexRange(format!("coefficient {i} of {}", lambdas.k())));
    }
    let g = cofactor_gcds(lambdas)?.get(i);
    let part = residue_partition(a, g as i64)?;
    let Some(class) = part.classes.get(j) else {
        return Err(Error::IndexRange(format!("class {j} of {} mod {g}", part.class_count())));
    };
    let fd = is_fd_mod_cofactor(&class.quotient, g)?;

    let mut sets: Vec<&IntSet> = vec![a; lambdas.k()];
    sets[i] = &class.members;
    let outer = mixed_dilate_sum(lambdas.coeffs(), &sets)?;
    let inner = dilate_sum(lambdas, &class.members)?;
    let min_class = part.min_class_size();
    let size_gap = Inequality::ge("class_size_gap", q(outer.len()), q(inner.len() + min_class));
    let quotient_sizes_match = part.classes.iter().all(|c| c.members.len() == c.quotient.len());

    Ok(DichotomyReport {
        kind: DichotomyKind::Class,
        lambdas: lambdas.clone(),
        set: a.clone(),
        witnesses: vec![i, j],
        quotient: class.quotient.clone(),
        fd,
        q: outer.difference(&inner).len(),
        size_gap,
        quotient_sizes_match: Some(quotient_sizes_match),
        branch: None,
        holds: false,
    }
    .decide())
}

/// Cell `e`: given every `A'_{i e_i}` FD mod `g_i`, either `P'_e` is FD mod
/// every `g_i`, or `|sum_i l_i*A_{i e_i}| >= |sum_i l_i*P_e| + |P_e|`.
pub fn verify_dist2(lambdas: &DilateTuple, a: &IntSet, e: usize) -> Result<DichotomyReport> {
    require_k2(lambdas)?;
    require_reduced(a)?;
    let fine = fine_partition(lambdas, a)?;
    let Some(cell) = fine.cells.get(e) else {
        return Err(Error::IndexRange(format!("cell {e} of {}", fine.cell_count())));
    };
    let g = fine.cofactors.as_slice();
    for (i, &gi) in g.iter().enumerate() {
        let class = fine.coarse_class(e, i);
        if !is_fd_mod_cofactor(&class.quotient, gi)? {
            return Err(Error::HypothesisFails(format!(
                "class quotient {} is not FD mod {gi} (coefficient {i}, cell {e})",
                class.quotient
            )));
        }
    }
    let fd = g
        .iter()
        .map(|&gi| is_fd_mod_cofactor(&cell.quotient, gi))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);

    let classes: Vec<&IntSet> = (0..lambdas.k()).map(|i| &fine.coarse_class(e, i).members).collect();
    let outer = mixed_dilate_sum(lambdas.coeffs(), &classes)?;
    let inner = dilate_sum(lambdas, &cell.members)?;
    let size_gap = Inequality::ge(
        "cell_size_gap",
        q(outer.len()),
        q(inner.len() + cell.members.len()),
    );
    let mut witnesses = vec![e];
    witnesses.extend(&cell.coarse_index);

    Ok(DichotomyReport {
        kind: DichotomyKind::Cell,
        lambdas: lambdas.clone(),
        set: a.clone(),
        witnesses,
        quotient: cell.quotient.clone(),
        fd,
        q: outer.difference(&inner).len(),
        size_gap,
        quotient_sizes_match: None,
        branch: None,
        holds: false,
    }
    .decide())
}

/// [`verify_dist1`] for every class `(i, j)`, in order.
pub fn verify_dist1_all(lambdas: &DilateTuple, a: &IntSet) -> Result<Vec<DichotomyReport>> {
    require_k2(lambdas)?;
    let g = cofactor_gcds(lambdas)?;
    let mut out = Vec::new();
    for i in 0..lambdas.k() {
        let classes = residue_partition(a, g.get(i) as i64)?.class_count();
        for j in 0..classes {
            out.push(verify_dist1(lambdas, a, i, j)?);
        }
    }
    Ok(out)
}

/// [`verify_dist2`] for every cell whose hypothesis holds, in order.
pub fn verify_dist2_all(lambdas: &DilateTuple, a: &IntSet) -> Result<Vec<DichotomyReport>> {
    require_k2(lambdas)?;
    let cells = fine_partition(lambdas, a)?.cell_count();
    let mut out = Vec::new();
    for e in 0..cells {
        match verify_dist2(lambdas, a, e) {
            Ok(r) => out.push(r),
            Err(Error::HypothesisFails(_)) => {}
            Err(err) => return Err(err),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(v: &[i64]) -> DilateTuple {
        DilateTuple::new(v.to_vec()).unwrap()
    }

    fn set(v: &[i64]) -> IntSet {
        IntSet::canonicalize(v.iter().copied())
    }

    #[test]
    fn dist1_fd_branch() {
        // g = (2, 1); classes mod 2 are {0,2} and {1,3}
        let rep = verify_dist1(&tuple(&[1, 2]), &set(&[0, 1, 2, 3]), 0, 0).unwrap();
        assert_eq!(rep.quotient, set(&[0, 1]));
        assert_eq!(rep.branch, Some(Branch::Fd));
        assert!(rep.holds);
        assert_eq!(rep.quotient_sizes_match, Some(true));
    }

    #[test]
    fn dist1_size_gap_branch() {
        let rep = verify_dist1(&tuple(&[1, 2]), &set(&[0, 1, 4, 5]), 0, 0).unwrap();
        assert_eq!(rep.quotient, set(&[0, 2]));
        assert!(!rep.fd);
        assert_eq!(rep.branch, Some(Branch::SizeGap));
        // {0,4} + 2*{0,1,4,5} has 8 elements; {0,4} + 2*{0,4} has 4
        assert_eq!(rep.size_gap.lhs, q(8));
        assert_eq!(rep.size_gap.rhs, q(4 + 2));
        assert_eq!(rep.q, 4);
    }

    #[test]
    fn dist1_trivial_modulus() {
        let a = set(&[0, 3, 4, 9]);
        for i in 0..2 {
            let rep = verify_dist1(&tuple(&[1, 1]), &a, i, 0).unwrap();
            assert_eq!(rep.branch, Some(Branch::Fd));
        }
    }

    #[test]
    fn dist1_preconditions() {
        let t = tuple(&[1, 2]);
        assert!(matches!(verify_dist1(&t, &set(&[0, 2, 4]), 0, 0), Err(Error::NotReduced(_))));
        assert!(matches!(verify_dist1(&t, &set(&[3, 4]), 0, 0), Err(Error::NotReduced(_))));
        assert!(matches!(verify_dist1(&t, &set(&[0]), 0, 0), Err(Error::NotReduced(_))));
        assert!(matches!(verify_dist1(&t, &set(&[0, 1]), 2, 0), Err(Error::IndexRange(_))));
        assert!(matches!(verify_dist1(&t, &set(&[0, 1]), 0, 2), Err(Error::IndexRange(_))));
        assert!(matches!(verify_dist1(&tuple(&[1]), &set(&[0, 1]), 0, 0), Err(Error::KTooSmall(1))));
    }

    #[test]
    fn dist2_fd_branch() {
        let rep = verify_dist2(&tuple(&[1, 2]), &set(&[0, 1, 2, 3]), 0).unwrap();
        assert_eq!(rep.quotient, set(&[0, 1]));
        assert_eq!(rep.branch, Some(Branch::Fd));
        assert_eq!(rep.witnesses, vec![0, 0, 0]);

        let rep = verify_dist2(&tuple(&[1, 1]), &set(&[0, 1, 5]), 0).unwrap();
        assert_eq!(rep.branch, Some(Branch::Fd));
    }

    #[test]
    fn dist2_hypothesis_is_checked() {
        // cell {1,5} sits in class {1,5} mod 2 whose quotient {0,2} is not FD mod 2
        assert!(matches!(
            verify_dist2(&tuple(&[1, 2]), &set(&[0, 1, 4, 5]), 1),
            Err(Error::HypothesisFails(_))
        ));
    }

    #[test]
    fn dist2_size_gap_branch() {
        // g = (3, 2), p = 6; cell at offset 0 is {0,6} with quotient {0,1}
        let rep = verify_dist2(&tuple(&[2, 3]), &set(&[0, 1, 3, 6]), 0).unwrap();
        assert_eq!(rep.quotient, set(&[0, 1]));
        assert!(!rep.fd);
        assert_eq!(rep.branch, Some(Branch::SizeGap));
        assert_eq!((rep.size_gap.lhs.clone(), rep.size_gap.rhs.clone()), (q(6), q(6)));
    }

    #[test]
    fn all_helpers_cover_every_object() {
        let t = tuple(&[2, 3]);
        let a = set(&[0, 1, 3, 6]);
        let d1 = verify_dist1_all(&t, &a).unwrap();
        assert_eq!(d1.len(), 2 + 2);
        assert!(d1.iter().all(|r| r.holds));
        let d2 = verify_dist2_all(&t, &a).unwrap();
        assert!(d2.iter().all(|r| r.holds));
    }

    #[test]
    fn report_json_shape() {
        let rep = verify_dist1(&tuple(&[1, 2]), &set(&[0, 1, 4, 5]), 0, 0).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["branch"], "SIZE_GAP");
        assert_eq!(v["size_gap"]["relation"], ">=");
        assert_eq!(v["size_gap"]["lhs"], "8");
        assert_eq!(v["q"], "4");
        assert_eq!(v["quotient"], "0,2");
    }
}
