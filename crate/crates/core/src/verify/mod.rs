//! Executable checks of the sum-of-dilates inequality and its lemmas on
//! concrete inputs. Every verifier returns a serializable report; a report
//! whose `holds` is false is a counterexample.

mod dichotomy;
mod trace;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

pub use dichotomy::{verify_dist1, verify_dist1_all, verify_dist2, verify_dist2_all, Branch, DichotomyKind, DichotomyReport};
pub use trace::{trace_cases, Case, CaseStep, CaseTrace, TraceObject};

use crate::bounds::{gmr_bound, interval_upper_bound, recursive_constants, ConstantLedger};
use crate::dilates::{dilate_sum, dilate_sum_size, mixed_dilate_sum, DilateTuple};
use crate::error::{Error, Result};
use crate::num_str;
use crate::residue::{cofactor_gcds, is_fd_mod_cofactor, residue_partition};
use crate::IntSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Gt,
    Le,
    Eq,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

/// One numeric instance `lhs (relation) rhs`, evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub name: String,
    #[serde(serialize_with = "num_str::rational")]
    pub lhs: BigRational,
    #[serde(serialize_with = "num_str::rational")]
    pub rhs: BigRational,
    pub relation: Relation,
    pub holds: bool,
}

impl Inequality {
    pub fn new(name: impl Into<String>, lhs: BigRational, relation: Relation, rhs: BigRational) -> Self {
        let holds = match relation {
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
        };
        Inequality {
            name: name.into(),
            lhs,
            rhs,
            relation,
            holds,
        }
    }

    pub fn ge(name: impl Into<String>, lhs: BigRational, rhs: BigRational) -> Self {
        Self::new(name, lhs, Relation::Ge, rhs)
    }
}

impl std::fmt::Display for Inequality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} {} {} ({})",
            self.name,
            self.lhs,
            self.relation.symbol(),
            self.rhs,
            if self.holds { "holds" } else { "FAILS" }
        )
    }
}

pub(crate) fn q(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Dilate-sum size through the kernel, falling back to the reference route
/// when the output span exceeds the kernel's bit budget.
pub(crate) fn dsize(lambdas: &DilateTuple, a: &IntSet) -> Result<usize> {
    match dilate_sum_size(lambdas, a) {
        Err(Error::WindowOverflow { .. }) => Ok(dilate_sum(lambdas, a)?.len()),
        other => other,
    }
}

fn ledger_summary<S: Serializer>(l: &Arc<ConstantLedger>, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Summary<'a> {
        #[serde(serialize_with = "num_str::rational")]
        c_prime: &'a BigRational,
        #[serde(serialize_with = "num_str::rational")]
        c_double_prime: &'a BigRational,
        #[serde(serialize_with = "num_str::rational")]
        c_final: &'a BigRational,
        #[serde(serialize_with = "num_str::opt_rational")]
        c_closed: &'a Option<BigRational>,
        #[serde(serialize_with = "num_str::bigint")]
        product: &'a BigInt,
    }
    Summary {
        c_prime: &l.c_prime,
        c_double_prime: &l.c_double_prime,
        c_final: &l.c_final,
        c_closed: &l.c_closed,
        product: &l.product,
    }
    .serialize(s)
}

/// A second lower bound reported next to the primary one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Threshold {
    #[serde(serialize_with = "num_str::rational")]
    pub bound: BigRational,
    #[serde(serialize_with = "num_str::rational")]
    pub slack: BigRational,
    pub holds: bool,
}

/// `actual >= bound` for one set.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub lambdas: DilateTuple,
    pub set: IntSet,
    #[serde(serialize_with = "num_str::display")]
    pub set_size: usize,
    #[serde(serialize_with = "num_str::display")]
    pub actual: usize,
    #[serde(serialize_with = "num_str::rational")]
    pub bound: BigRational,
    #[serde(serialize_with = "num_str::rational")]
    pub slack: BigRational,
    /// The bound is below `|A|` and says nothing at this size.
    pub vacuous: bool,
    pub holds: bool,
    pub stronger: Option<Threshold>,
    #[serde(rename = "constants_used", serialize_with = "ledger_summary")]
    pub constants: Arc<ConstantLedger>,
}

fn bound_report(
    lambdas: &DilateTuple,
    a: &IntSet,
    actual: usize,
    bound: BigRational,
    stronger: Option<BigRational>,
    constants: Arc<ConstantLedger>,
) -> BoundReport {
    let slack = q(actual) - &bound;
    let stronger = stronger.map(|b| {
        let slack = q(actual) - &b;
        Threshold {
            holds: slack >= BigRational::from_integer(0.into()),
            bound: b,
            slack,
        }
    });
    BoundReport {
        lambdas: lambdas.clone(),
        set: a.clone(),
        set_size: a.len(),
        actual,
        vacuous: bound < q(a.len()),
        holds: slack >= BigRational::from_integer(0.into()),
        bound,
        slack,
        stronger,
        constants,
    }
}

/// `|l_1*A + ... + l_k*A| >= S|A| - C`.
pub fn verify_main(lambdas: &DilateTuple, a: &IntSet) -> Result<BoundReport> {
    verify_main_with(&recursive_constants(lambdas)?, lambdas, a)
}

/// [`verify_main`] with a precomputed ledger for `lambdas`.
pub fn verify_main_with(ledger: &Arc<ConstantLedger>, lambdas: &DilateTuple, a: &IntSet) -> Result<BoundReport> {
    let actual = dsize(lambdas, a)?;
    Ok(bound_report(lambdas, a, actual, ledger.theorem_bound(a.len()), None, ledger.clone()))
}

/// FD lemma: when `A` meets every class mod every `g_i`,
/// `|sum| >= S|A| - (C' + P)`. The tighter threshold with the `1/(k-1)`
/// factor is reported as `stronger`.
pub fn verify_fd_lemma(lambdas: &DilateTuple, a: &IntSet) -> Result<BoundReport> {
    verify_fd_lemma_with(&recursive_constants(lambdas)?, lambdas, a)
}

pub fn verify_fd_lemma_with(ledger: &Arc<ConstantLedger>, lambdas: &DilateTuple, a: &IntSet) -> Result<BoundReport> {
    if a.is_empty() {
        return Err(Error::EmptyOperand);
    }
    let g = cofactor_gcds(lambdas)?;
    for &gi in g.as_slice() {
        if !is_fd_mod_cofactor(a, gi)? {
            return Err(Error::FdHypothesisFails { modulus: gi });
        }
    }
    let actual = dsize(lambdas, a)?;
    let s_n = q(lambdas.weight() as usize * a.len());
    let constant = ledger.fd_constant();
    let stronger = (lambdas.k() >= 2).then(|| &s_n - &constant / q(lambdas.k() - 1));
    Ok(bound_report(lambdas, a, actual, s_n - constant, stronger, ledger.clone()))
}

#[derive(Clone, Debug, Serialize)]
pub struct GmrReport {
    pub sets: Vec<IntSet>,
    #[serde(serialize_with = "num_str::display_vec")]
    pub leave_one_out: Vec<usize>,
    #[serde(serialize_with = "num_str::display")]
    pub total: usize,
    #[serde(serialize_with = "num_str::rational")]
    pub bound: BigRational,
    pub inequality: Inequality,
    pub equality: bool,
    pub holds: bool,
}

fn sum_all<'a>(sets: impl Iterator<Item = &'a IntSet>) -> Result<IntSet> {
    let mut acc: Option<IntSet> = None;
    for s in sets {
        acc = Some(match acc {
            None => s.clone(),
            Some(a) => a.sumset(s)?,
        });
    }
    acc.ok_or(Error::EmptyOperand)
}

/// `|A_1 + ... + A_k| >= (sum_i |S_i| - 1)/(k-1)`, `S_i` the sum without `A_i`.
pub fn verify_gmr(sets: &[IntSet]) -> Result<GmrReport> {
    if sets.len() < 2 {
        return Err(Error::KTooSmall(sets.len()));
    }
    if sets.iter().any(IntSet::is_empty) {
        return Err(Error::EmptyOperand);
    }
    let total = sum_all(sets.iter())?.len();
    let leave_one_out = (0..sets.len())
        .map(|i| {
            Ok(sum_all(sets.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, s)| s))?.len())
        })
        .collect::<Result<Vec<usize>>>()?;
    let bound = gmr_bound(&leave_one_out)?;
    let inequality = Inequality::ge("gmr", q(total), bound.clone());
    Ok(GmrReport {
        sets: sets.to_vec(),
        equality: q(total) == bound,
        holds: inequality.holds,
        leave_one_out,
        total,
        bound,
        inequality,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub lambdas: DilateTuple,
    pub set: IntSet,
    #[serde(serialize_with = "num_str::display")]
    pub lhs: usize,
    #[serde(serialize_with = "num_str::display")]
    pub summand_count: usize,
    #[serde(serialize_with = "num_str::display_vec")]
    pub summand_sizes: Vec<usize>,
    #[serde(serialize_with = "num_str::display")]
    pub summand_total: usize,
    pub disjoint: bool,
    /// The summands cover exactly the dilate sum.
    pub union_matches: bool,
    pub holds: bool,
}

/// The dilate sum splits as the disjoint union, over all choices of one
/// class `A_{i j_i}` mod `g_i` per coefficient, of `sum_i l_i * A_{i j_i}`.
pub fn verify_decomposition(lambdas: &DilateTuple, a: &IntSet) -> Result<DecompositionReport> {
    if a.is_empty() {
        return Err(Error::EmptyOperand);
    }
    if lambdas.k() < 2 {
        return Err(Error::KTooSmall(lambdas.k()));
    }
    let g = cofactor_gcds(lambdas)?;
    let parts = g
        .as_slice()
        .iter()
        .map(|&gi| residue_partition(a, gi as i64))
        .collect::<Result<Vec<_>>>()?;
    let full = dilate_sum(lambdas, a)?;

    let mut summand_sizes = Vec::new();
    let mut all = Vec::new();
    let mut choice = vec![0usize; lambdas.k()];
    loop {
        let sets: Vec<&IntSet> = choice
            .iter()
            .zip(&parts)
            .map(|(&j, p)| &p.classes[j].members)
            .collect();
        let summand = mixed_dilate_sum(lambdas.coeffs(), &sets)?;
        summand_sizes.push(summand.len());
        all.extend(summand.iter().copied());
        // odometer over the class indices
        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < parts[i].class_count() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
    }
    let summand_total: usize = summand_sizes.iter().sum();
    let union = IntSet::canonicalize(all);
    let disjoint = union.len() == summand_total;
    let union_matches = union == full;
    Ok(DecompositionReport {
        lambdas: lambdas.clone(),
        set: a.clone(),
        lhs: full.len(),
        summand_count: summand_sizes.len(),
        holds: disjoint && union_matches && full.len() == summand_total,
        summand_sizes,
        summand_total,
        disjoint,
        union_matches,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalReport {
    pub lambdas: DilateTuple,
    #[serde(serialize_with = "num_str::display")]
    pub n: u64,
    #[serde(serialize_with = "num_str::display")]
    pub size: usize,
    #[serde(serialize_with = "num_str::bigint")]
    pub upper_bound: BigInt,
    /// The translated interval `[lo, lo + S(n-1)]` that must contain the sum.
    #[serde(serialize_with = "num_str::display")]
    pub window_lo: i128,
    #[serde(serialize_with = "num_str::display")]
    pub window_hi: i128,
    pub contained: bool,
    pub tight: bool,
    pub holds: bool,
}

/// For `X = {0, ..., n-1}` the dilate sum sits inside
/// `(n-1) * (sum of negative l_i) + [0, S(n-1)]`, so it has at most
/// `S n - (S - 1)` elements.
pub fn verify_interval(lambdas: &DilateTuple, n: u64) -> Result<IntervalReport> {
    if n == 0 {
        return Err(Error::EmptyOperand);
    }
    let x = IntSet::interval(0, n as usize)?;
    let sum = crate::dilates::dilate_sum_fast(lambdas, &x).or_else(|e| match e {
        Error::WindowOverflow { .. } => dilate_sum(lambdas, &x),
        e => Err(e),
    })?;
    let window_lo = (n as i128 - 1) * lambdas.negative_sum() as i128;
    let window_hi = window_lo + lambdas.weight() as i128 * (n as i128 - 1);
    let contained = sum
        .iter()
        .all(|&v| (window_lo..=window_hi).contains(&(v as i128)));
    let upper_bound = interval_upper_bound(lambdas, n);
    let size = sum.len();
    Ok(IntervalReport {
        lambdas: lambdas.clone(),
        n,
        size,
        contained,
        tight: BigInt::from(size) == upper_bound,
        holds: contained && BigInt::from(size) <= upper_bound,
        upper_bound,
        window_lo,
        window_hi,
    })
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

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn main_examples() {
        let rep = verify_main(&tuple(&[1, 1]), &set(&[0, 1, 3])).unwrap();
        assert_eq!((rep.actual, rep.bound.clone(), rep.slack.clone()), (6, r(5), r(1)));
        assert!(rep.holds && !rep.vacuous);

        let rep = verify_main(&tuple(&[1, 2]), &set(&[0, 1])).unwrap();
        assert_eq!((rep.actual, rep.bound.clone(), rep.slack.clone()), (4, r(-1018), r(1022)));
        assert!(rep.holds && rep.vacuous);

        let rep = verify_main(&tuple(&[1]), &set(&[5, 9])).unwrap();
        assert_eq!((rep.actual, rep.bound.clone(), rep.slack.clone()), (2, r(2), r(0)));
        assert!(rep.holds);
    }

    #[test]
    fn main_report_json() {
        let rep = verify_main(&tuple(&[1, 1]), &set(&[0, 1, 3])).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["actual"], "6");
        assert_eq!(v["slack"], "1");
        assert_eq!(v["set"], "0,1,3");
        assert_eq!(v["lambdas"], "1,1");
        assert_eq!(v["constants_used"]["c_final"], "1");
    }

    #[test]
    fn gmr_examples() {
        let rep = verify_gmr(&[set(&[0, 1]), set(&[0, 1])]).unwrap();
        assert_eq!((rep.total, rep.bound.clone()), (3, r(3)));
        assert!(rep.equality && rep.holds);

        let rep = verify_gmr(&[set(&[0, 1]), set(&[0, 1]), set(&[0, 1])]).unwrap();
        assert_eq!(rep.leave_one_out, vec![3, 3, 3]);
        assert_eq!((rep.total, rep.bound.clone()), (4, r(4)));
        assert!(rep.equality && rep.holds);

        let rep = verify_gmr(&[set(&[4]), set(&[-2])]).unwrap();
        assert_eq!((rep.total, rep.bound.clone()), (1, r(1)));
        assert!(rep.equality);

        assert!(matches!(verify_gmr(&[set(&[1])]), Err(Error::KTooSmall(1))));
        assert!(matches!(verify_gmr(&[set(&[1]), IntSet::empty()]), Err(Error::EmptyOperand)));
    }

    #[test]
    fn decomposition_examples() {
        let rep = verify_decomposition(&tuple(&[2, 3]), &set(&[0, 1])).unwrap();
        assert_eq!(rep.lhs, 4);
        assert_eq!(rep.summand_sizes, vec![1, 1, 1, 1]);
        assert!(rep.holds);

        let a = set(&[0, 2, 5, 9]);
        let rep = verify_decomposition(&tuple(&[1, 1]), &a).unwrap();
        assert_eq!(rep.summand_count, 1);
        assert_eq!(rep.summand_total, rep.lhs);
        assert!(rep.holds);

        let rep = verify_decomposition(&tuple(&[1, 2]), &set(&[0, 1, 2, 3])).unwrap();
        assert_eq!(rep.lhs, 10);
        // classes mod 2: {0,2} and {1,3}; mod 1: the whole set
        assert_eq!(rep.summand_sizes, vec![5, 5]);
        assert!(rep.disjoint && rep.union_matches && rep.holds);
    }

    #[test]
    fn fd_lemma_examples() {
        let a = set(&[0, 1, 5, 6, 9]);
        let rep = verify_fd_lemma(&tuple(&[1, 1]), &a).unwrap();
        assert_eq!(rep.bound, r(2 * 5 - 1));
        assert!(rep.holds);

        let rep = verify_fd_lemma(&tuple(&[1, 2]), &set(&[0, 1, 2, 3])).unwrap();
        assert_eq!(rep.bound, r(12 - 2));
        assert_eq!(rep.actual, 10);
        assert!(rep.holds);
        assert_eq!(rep.stronger.as_ref().unwrap().bound, r(10));

        let rep = verify_fd_lemma(&tuple(&[2, 3]), &set(&[0, 1, 2, 3, 4, 5])).unwrap();
        assert!(rep.holds);

        assert!(matches!(
            verify_fd_lemma(&tuple(&[1, 2]), &set(&[0, 2, 4])),
            Err(Error::FdHypothesisFails { modulus: 2 })
        ));
    }

    #[test]
    fn interval_examples() {
        let rep = verify_interval(&tuple(&[1, 2]), 3).unwrap();
        assert_eq!((rep.size, rep.upper_bound.clone()), (7, BigInt::from(7)));
        assert!(rep.contained && rep.tight && rep.holds);

        let rep = verify_interval(&tuple(&[2, 3]), 2).unwrap();
        assert_eq!((rep.size, rep.upper_bound.clone()), (4, BigInt::from(6)));
        assert!(rep.holds && !rep.tight);

        let rep = verify_interval(&tuple(&[1, 1]), 5).unwrap();
        assert_eq!(rep.size, 9);
        assert!(rep.tight);

        let rep = verify_interval(&tuple(&[1, -2]), 4).unwrap();
        assert_eq!((rep.window_lo, rep.window_hi), (-6, 3));
        assert!(rep.holds);
    }

    #[test]
    fn inequality_display() {
        let i = Inequality::ge("x", r(3), r(4));
        assert!(!i.holds);
        assert_eq!(i.to_string(), "x: 3 >= 4 (FAILS)");
        assert!(Inequality::new("y", r(1), Relation::Gt, r(0)).holds);
        assert!(!Inequality::new("y", r(1), Relation::Gt, r(1)).holds);
    }
}
