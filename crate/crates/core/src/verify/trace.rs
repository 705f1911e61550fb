//! Replay of one induction step `u -> u + 1` of the level bound
//! `|sum l_i*A| >= (u/S)|A| - K_u`, `K_u = C'' * P^u`, on a concrete set.
//!
//! Objects are classified in order: (i) a small class, (ii) a class whose
//! quotient is not fully distributed, then per cell (iii) a cell quotient
//! that is not fully distributed, or (iv) one that is. Each inequality the
//! step relies on is evaluated on the actual sets.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use super::dichotomy::{require_k2, verify_dist1, verify_dist2};
use super::{dsize, q, verify_fd_lemma_with, Inequality, Relation};
use crate::bounds::{recursive_constants, ConstantLedger};
use crate::dilates::{mixed_dilate_sum, DilateTuple};
use crate::error::{Error, Result};
use crate::num_str;
use crate::residue::{cofactor_gcds, fine_partition, is_fd_mod_cofactor, residue_partition};
use crate::ResiduePartition;
use crate::IntSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    I,
    Ii,
    Iii,
    Iv,
}

impl Case {
    pub fn label(self) -> &'static str {
        match self {
            Case::I => "(i)",
            Case::Ii => "(ii)",
            Case::Iii => "(iii)",
            Case::Iv => "(iv)",
        }
    }
}

impl Serialize for Case {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TraceObject {
    /// Class `j` of the partition mod `g_i`.
    Class { i: usize, j: usize },
    /// Cell `e` of the partition mod `p`, lying in classes `e_1, ..., e_k`.
    Cell { e: usize, classes: Vec<usize> },
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseStep {
    pub case: Case,
    pub object: TraceObject,
    pub checks: Vec<Inequality>,
}

impl CaseStep {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseTrace {
    pub lambdas: DilateTuple,
    pub set: IntSet,
    #[serde(serialize_with = "num_str::display")]
    pub u: u64,
    #[serde(serialize_with = "num_str::rational")]
    pub level_constant: BigRational,
    #[serde(serialize_with = "num_str::rational")]
    pub next_level_constant: BigRational,
    pub steps: Vec<CaseStep>,
    /// Checks combining the steps into the level `u + 1` bound for `A`.
    pub closing: Vec<Inequality>,
    pub all_hold: bool,
    /// No object carries two case labels.
    pub labels_unique: bool,
}

impl CaseTrace {
    pub fn inequalities(&self) -> impl Iterator<Item = &Inequality> {
        self.steps.iter().flat_map(|s| &s.checks).chain(&self.closing)
    }

    pub fn failures(&self) -> Vec<&Inequality> {
        self.inequalities().filter(|i| !i.holds).collect()
    }
}

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

struct Ctx<'a> {
    lambdas: &'a DilateTuple,
    a: &'a IntSet,
    ledger: Arc<ConstantLedger>,
    s: u64,
    u: u64,
    k_u: BigRational,
    k_next: BigRational,
}

impl Ctx<'_> {
    /// `(u/S) n`.
    fn level(&self, n: usize) -> BigRational {
        rat(BigInt::from(self.u) * BigInt::from(n), self.s)
    }

    /// `((u+1)/S) n`.
    fn next_level(&self, n: usize) -> BigRational {
        rat(BigInt::from(self.u + 1) * BigInt::from(n), self.s)
    }

    /// Level-`u` bound on `|sum l_i*X|`, checked on the actual `X`.
    fn induction(&self, name: &str, x: &IntSet) -> Result<Inequality> {
        Ok(Inequality::ge(name, q(dsize(self.lambdas, x)?), self.level(x.len()) - &self.k_u))
    }

    /// `|sum l*A| >= |l_i*A_ij + sum_{c != i} l_c*A| + |sum l*(A \ A_ij)|`.
    fn split(&self, i: usize, class: &IntSet, outer: usize) -> Result<(Inequality, IntSet)> {
        let rest = self.a.difference(class);
        let whole = dsize(self.lambdas, self.a)?;
        let rest_size = dsize(self.lambdas, &rest)?;
        let ineq = Inequality::ge(format!("split_{i}"), q(whole), q(outer + rest_size));
        Ok((ineq, rest))
    }

    fn outer(&self, i: usize, class: &IntSet) -> Result<usize> {
        let mut sets: Vec<&IntSet> = vec![self.a; self.lambdas.k()];
        sets[i] = class;
        Ok(mixed_dilate_sum(self.lambdas.coeffs(), &sets)?.len())
    }

    fn small_class(&self, i: usize, j: usize, class: &IntSet) -> Result<CaseStep> {
        let n = self.a.len();
        let m = class.len();
        let outer = self.outer(i, class)?;
        let (split, rest) = self.split(i, class, outer)?;
        let checks = vec![
            Inequality::new(
                "class_is_small",
                q(m * self.s as usize),
                Relation::Le,
                q(n),
            ),
            split,
            Inequality::ge("sumset_lower_bound", q(outer), q(m + n - 1)),
            self.induction("induction_complement", &rest)?,
            Inequality::ge(
                "algebra",
                q(m + n - 1) + self.level(n - m) - &self.k_u,
                self.next_level(n) - &self.k_next,
            ),
        ];
        Ok(CaseStep {
            case: Case::I,
            object: TraceObject::Class { i, j },
            checks,
        })
    }

    fn spread_class(&self, i: usize, j: usize, part: &ResiduePartition) -> Result<CaseStep> {
        let n = self.a.len();
        let class = &part.classes[j].members;
        let m = class.len();
        let outer = self.outer(i, class)?;
        let (split, rest) = self.split(i, class, outer)?;
        let dist1 = verify_dist1(self.lambdas, self.a, i, j)?;
        let mut lemma = dist1.size_gap.clone();
        lemma.name = "class_dichotomy_gap".into();
        let min_w = part.min_class_size();
        let checks = vec![
            split,
            lemma,
            self.induction("induction_class", class)?,
            Inequality::new("classes_are_large", q(min_w * self.s as usize), Relation::Gt, q(n)),
            self.induction("induction_complement", &rest)?,
            Inequality::ge(
                "algebra",
                self.level(m) - &self.k_u + rat(n, self.s) + self.level(n - m) - &self.k_u,
                self.next_level(n) - &self.k_next,
            ),
        ];
        Ok(CaseStep {
            case: Case::Ii,
            object: TraceObject::Class { i, j },
            checks,
        })
    }
}

/// Replays the step from level `u` to `u + 1` for reduced `A`, `S <= u < S^2`.
pub fn trace_cases(lambdas: &DilateTuple, a: &IntSet, u: u64) -> Result<CaseTrace> {
    let s = lambdas.weight();
    let hi = s
        .checked_mul(s)
        .ok_or_else(|| Error::Overflow("S^2".into()))?;
    if u < s || u >= hi {
        return Err(Error::URange { u, lo: s, hi: hi - 1 });
    }
    require_k2(lambdas)?;
    if a.is_empty() {
        return Err(Error::EmptyOperand);
    }
    if a.len() == 1 {
        return Err(Error::NotReduced(format!("{a} is a singleton")));
    }
    if !a.is_reduced()? {
        return Err(Error::NotReduced(a.to_string()));
    }

    let ledger = recursive_constants(lambdas)?;
    let ctx = Ctx {
        lambdas,
        a,
        s,
        u,
        k_u: ledger.level_constant(u)?,
        k_next: ledger.level_constant(u + 1)?,
        ledger,
    };
    let n = a.len();
    let g = cofactor_gcds(lambdas)?;
    let parts = g
        .as_slice()
        .iter()
        .map(|&gi| residue_partition(a, gi as i64))
        .collect::<Result<Vec<_>>>()?;

    let mut steps = Vec::new();
    // (i): the first class with |A_ij| <= |A|/S
    'small: for (i, part) in parts.iter().enumerate() {
        for (j, class) in part.classes.iter().enumerate() {
            if class.members.len() * s as usize <= n {
                steps.push(ctx.small_class(i, j, &class.members)?);
                break 'small;
            }
        }
    }
    // (ii): the first class whose quotient is not FD mod g_i
    if steps.is_empty() {
        'spread: for (i, part) in parts.iter().enumerate() {
            for (j, class) in part.classes.iter().enumerate() {
                if !is_fd_mod_cofactor(&class.quotient, g.get(i))? {
                    steps.push(ctx.spread_class(i, j, part)?);
                    break 'spread;
                }
            }
        }
    }

    let whole = dsize(lambdas, a)?;
    let conclusion = Inequality::ge("conclusion", q(whole), ctx.next_level(n) - &ctx.k_next);
    let mut closing = Vec::new();

    if steps.is_empty() {
        let fine = fine_partition(lambdas, a)?;
        let mut cell_total = 0usize;
        for (e, cell) in fine.cells.iter().enumerate() {
            let classes: Vec<&IntSet> = (0..lambdas.k()).map(|i| &fine.coarse_class(e, i).members).collect();
            let outer = mixed_dilate_sum(lambdas.coeffs(), &classes)?.len();
            cell_total += outer;
            let pe = &cell.members;
            let pn = pe.len();
            let inner = dsize(lambdas, pe)?;
            let cell_bound = Inequality::ge("cell_bound", q(outer), ctx.next_level(pn) - &ctx.k_u);

            let fd = g
                .as_slice()
                .iter()
                .map(|&gi| is_fd_mod_cofactor(&cell.quotient, gi))
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .all(|b| b);
            let (case, checks) = if !fd {
                let dist2 = verify_dist2(lambdas, a, e)?;
                let mut lemma = dist2.size_gap.clone();
                lemma.name = "cell_dichotomy_gap".into();
                let checks = vec![
                    lemma,
                    ctx.induction("induction_cell", pe)?,
                    Inequality::ge(
                        "algebra",
                        ctx.level(pn) - &ctx.k_u + q(pn),
                        ctx.next_level(pn) - &ctx.k_u,
                    ),
                    cell_bound,
                ];
                (Case::Iii, checks)
            } else {
                let quotient = &cell.quotient;
                let lemma = verify_fd_lemma_with(&ctx.ledger, lambdas, quotient)?;
                let qn = quotient.len();
                let stated = Inequality::ge("fd_bound_stated", q(lemma.actual), lemma.bound.clone());
                let tightened = lemma.stronger.as_ref().map(|t| t.bound.clone()).unwrap_or_else(|| lemma.bound.clone());
                let fd_over_k = ctx.ledger.fd_constant() / q(lambdas.k() - 1);
                let checks = vec![
                    Inequality::new("affine_invariance", q(inner), Relation::Eq, q(lemma.actual)),
                    stated,
                    Inequality::ge("fd_bound_tightened", q(lemma.actual), tightened),
                    Inequality::ge("constant_order", ctx.ledger.c_double_prime.clone(), fd_over_k),
                    Inequality::ge(
                        "algebra",
                        q(s as usize * qn) - &ctx.ledger.c_double_prime,
                        ctx.next_level(pn) - &ctx.k_u,
                    ),
                    Inequality::ge("cell_monotone", q(outer), q(inner)),
                    cell_bound,
                ];
                (Case::Iv, checks)
            };
            steps.push(CaseStep {
                case,
                object: TraceObject::Cell {
                    e,
                    classes: cell.coarse_index.clone(),
                },
                checks,
            });
        }
        let m = fine.cell_count();
        closing.push(Inequality::ge("cell_summands", q(whole), q(cell_total)));
        closing.push(Inequality::new(
            "cell_count",
            q(m) * &ctx.k_u,
            Relation::Le,
            ctx.k_next.clone(),
        ));
    }
    closing.push(conclusion);

    let mut seen = HashSet::new();
    let labels_unique = steps.iter().all(|st| seen.insert(st.object.clone()));
    let all_hold = steps.iter().all(CaseStep::holds) && closing.iter().all(|c| c.holds);
    Ok(CaseTrace {
        lambdas: lambdas.clone(),
        set: a.clone(),
        u,
        level_constant: ctx.k_u,
        next_level_constant: ctx.k_next,
        steps,
        closing,
        all_hold,
        labels_unique,
    })
}
